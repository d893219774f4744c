"""
URL configuration for the compiler_api app.

URL Patterns:
    - generate/ : Instance elaboration endpoint
    - area/ : Area estimate endpoint
    - characterize/ : Characterization sweep endpoint
    - health/ : Health check endpoint
"""

from django.urls import path
from .views import (
    AreaView,
    CharacterizeView,
    GenerateView,
    HealthCheckView
)

app_name = 'compiler_api'

urlpatterns = [
    path('generate/', GenerateView.as_view(), name='generate'),
    path('area/', AreaView.as_view(), name='area'),
    path('characterize/', CharacterizeView.as_view(), name='characterize'),

    path('health/', HealthCheckView.as_view(), name='health-check'),
]
