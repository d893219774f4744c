"""
Django app configuration for the Compiler API.
"""

from django.apps import AppConfig


class CompilerApiConfig(AppConfig):
    """
    Configuration class for the Compiler API app.
    """
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'compiler_api'
    verbose_name = 'RRAM Compiler API'
