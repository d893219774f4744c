"""
Main URL configuration for the RRAM memory compiler.

The API provides the following main endpoints:
- /api/generate/ - Netlist statistics, area and optional structural netlist
- /api/area/ - Floorplan area and density estimate
- /api/characterize/ - W1/W2/R1/R2 characterization sweep
- /api/health/ - Health check
"""

from django.urls import path, include
from django.http import JsonResponse


def api_root(request):
    """Root API endpoint providing service information and available endpoints."""
    return JsonResponse({
        'service': 'RRAM Memory Compiler',
        'version': '1.0.0',
        'description': 'Generation, behavioral simulation and characterization of RRAM memory instances',
        'endpoints': {
            'health': '/api/health/',
            'generate': '/api/generate/',
            'area': '/api/area/',
            'characterize': '/api/characterize/',
        },
    })


urlpatterns = [
    path('api/', include('compiler_api.urls')),
    path('', api_root, name='api-root'),
]
