"""
API views for the RRAM compiler.

This module contains Django REST Framework views that expose generation,
area estimation and characterization as stateless JSON endpoints. Every
request is evaluated against the profile named by RRAM_PROFILE_PATH.

The views provide:
- Validation through the compiler_api serializers
- Consistent JSON response formats
- Request/response logging

Classes:
    GenerateView: Netlist statistics and optional structural netlist
    AreaView: Floorplan area and density estimate
    CharacterizeView: W1/W2/R1/R2 characterization sweep
    HealthCheckView: Provides API health status
"""

import logging

from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from compiler_modules.floorplan import estimate_area

from .serializers import CharacterizeSerializer, GenerateSerializer, GeometrySerializer
from .services import CompilerService

logger = logging.getLogger(__name__)


def _validation_error(serializer):
    return Response({
        'success': False,
        'error': 'Validation error',
        'details': serializer.errors
    }, status=status.HTTP_400_BAD_REQUEST)


class GenerateView(APIView):
    """
    API endpoint for elaborating one memory instance.

    **POST /api/generate/**

    Request format (application/json):
    ```json
    {
        "M": 32,
        "N": 32,
        "B": 4,
        "include_netlist": false
    }
    ```

    Response format:
    ```json
    {
        "success": true,
        "design": "rram_M32_N32_B4",
        "counts": {"MemCell1T1R": 1024, "RefCell": 128, ..., "instances": 1257},
        "expected_counts": {...},
        "area": {"width_um": ..., "height_um": ..., "area_mm2": ..., "density_mb_per_mm2": ...},
        "message": "Instance generated successfully"
    }
    ```

    **Status Codes:**
    - 200: Generation successful
    - 400: Bad request (invalid geometry)
    - 500: Internal server error
    """

    def post(self, request, *args, **kwargs):
        """Handle POST request for generation."""
        try:
            serializer = GenerateSerializer(data=request.data)
            if not serializer.is_valid():
                logger.error(f"Generate validation failed: {serializer.errors}")
                return _validation_error(serializer)

            validated_data = serializer.validated_data
            _, technology = CompilerService.load_technology()
            summary = CompilerService.generation_summary(
                validated_data['geometry'], # type: ignore
                technology,
                include_netlist=validated_data['include_netlist'], # type: ignore
            )

            return Response({
                'success': True,
                **summary,
                'message': 'Instance generated successfully'
            }, status=status.HTTP_200_OK)

        except ValueError as e:
            logger.error(f"Generation validation error: {str(e)}")
            return Response({
                'success': False,
                'error': 'Generation failed',
                'details': str(e)
            }, status=status.HTTP_400_BAD_REQUEST)

        except Exception as e:
            logger.error(f"Generation server error: {str(e)}")
            return Response({
                'success': False,
                'error': 'Internal server error',
                'details': 'An unexpected error occurred during generation'
            }, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


class AreaView(APIView):
    """
    API endpoint for the floorplan area estimate.

    **POST /api/area/**

    Request format (application/json):
    ```json
    {"M": 128, "N": 64, "B": 8}
    ```

    Response format:
    ```json
    {
        "success": true,
        "design": "M128_N64_B8",
        "capacity_bits": 8192,
        "area": {"width_um": 524.3, "height_um": 651.5, "area_mm2": 0.341, "density_mb_per_mm2": 0.024},
        "message": "Area estimated successfully"
    }
    ```

    **Status Codes:**
    - 200: Estimate successful
    - 400: Bad request (invalid geometry)
    - 500: Internal server error
    """

    def post(self, request, *args, **kwargs):
        """Handle POST request for area estimation."""
        try:
            serializer = GeometrySerializer(data=request.data)
            if not serializer.is_valid():
                logger.error(f"Area validation failed: {serializer.errors}")
                return _validation_error(serializer)

            g = serializer.validated_data['geometry'] # type: ignore
            _, technology = CompilerService.load_technology()
            area = estimate_area(g, technology)
            logger.info(f"Area of {g.label()}: {area.area_mm2:.4f} mm2")

            return Response({
                'success': True,
                'design': g.label(),
                'capacity_bits': g.capacity_bits,
                'area': area.as_dict(),
                'message': 'Area estimated successfully'
            }, status=status.HTTP_200_OK)

        except ValueError as e:
            logger.error(f"Area validation error: {str(e)}")
            return Response({
                'success': False,
                'error': 'Area estimation failed',
                'details': str(e)
            }, status=status.HTTP_400_BAD_REQUEST)

        except Exception as e:
            logger.error(f"Area server error: {str(e)}")
            return Response({
                'success': False,
                'error': 'Internal server error',
                'details': 'An unexpected error occurred during area estimation'
            }, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


class CharacterizeView(APIView):
    """
    API endpoint for running a characterization sweep.

    Sweeps are bounded by RRAM_API_MAX_SWEEP_CELLS (sizes x clocks x
    corners); larger sweeps belong to the characterize command.

    **POST /api/characterize/**

    Request format (application/json):
    ```json
    {
        "sizes": [{"M": 32, "N": 32, "B": 4}],
        "clocks_hz": [25000000],
        "corners": ["TT", "FS"],
        "ratio": 0.3
    }
    ```

    Response format:
    ```json
    {
        "success": true,
        "all_passed": true,
        "report": {"schema_version": 1, "note": "...", "rows": [...], "summary": {...}},
        "message": "Characterization completed"
    }
    ```

    A sweep with failing tests still returns 200; check all_passed.

    **Status Codes:**
    - 200: Sweep completed
    - 400: Bad request (invalid sizes, clocks, corners or ratio)
    - 500: Internal server error
    """

    def post(self, request, *args, **kwargs):
        """Handle POST request for characterization."""
        try:
            serializer = CharacterizeSerializer(data=request.data)
            if not serializer.is_valid():
                logger.error(f"Characterize validation failed: {serializer.errors}")
                return _validation_error(serializer)

            validated_data = serializer.validated_data
            bundle, technology = CompilerService.load_technology()
            corners = CompilerService.resolve_corners(bundle, ",".join(validated_data['corners'])) # type: ignore
            configs = [(size['geometry'], clock_hz)
                       for size in validated_data['sizes'] # type: ignore
                       for clock_hz in validated_data['clocks_hz']] # type: ignore

            report = CompilerService.characterization_summary(
                configs, technology, corners, ratio=validated_data['ratio'] # type: ignore
            )
            logger.info(f"Characterization via API: {report['summary']}")

            return Response({
                'success': True,
                'all_passed': report['summary']['all_passed'],
                'report': report,
                'message': 'Characterization completed'
            }, status=status.HTTP_200_OK)

        except ValueError as e:
            logger.error(f"Characterization validation error: {str(e)}")
            return Response({
                'success': False,
                'error': 'Characterization failed',
                'details': str(e)
            }, status=status.HTTP_400_BAD_REQUEST)

        except Exception as e:
            logger.error(f"Characterization server error: {str(e)}")
            return Response({
                'success': False,
                'error': 'Internal server error',
                'details': 'An unexpected error occurred during characterization'
            }, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


class HealthCheckView(APIView):
    """
    API endpoint for health check and service information.

    **GET /api/health/**

    Response format:
    ```json
    {
        "status": "healthy",
        "service": "RRAM Memory Compiler",
        "version": "1.0.0",
        "timestamp": "2024-01-01T12:00:00Z",
        "endpoints": {
            "generate": "/api/generate/",
            "area": "/api/area/",
            "characterize": "/api/characterize/"
        }
    }
    ```
    """

    def get(self, request, *args, **kwargs):
        """Handle GET request for health check."""
        from django.utils import timezone

        return Response({
            'status': 'healthy',
            'service': 'RRAM Memory Compiler',
            'version': '1.0.0',
            'timestamp': timezone.now().isoformat(),
            'endpoints': {
                'generate': '/api/generate/',
                'area': '/api/area/',
                'characterize': '/api/characterize/'
            }
        }, status=status.HTTP_200_OK)
