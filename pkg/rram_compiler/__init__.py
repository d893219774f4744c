"""
Django project for the RRAM memory compiler.

Hosts the compiler's management commands and its stateless JSON API.
"""
