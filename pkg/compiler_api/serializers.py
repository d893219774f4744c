"""
Serializers for the RRAM compiler API.

This module contains Django REST Framework serializers that validate
request bodies and profile files before they reach the service layer.

Classes:
    GeometrySerializer: Validates an (M, N, B) triple
    GenerateSerializer: Generation request
    CharacterizeSerializer: Characterization sweep request
    ProfileSerializer: Technology profile file, with its nested sections
"""

from collections.abc import Mapping
from dataclasses import fields

from django.conf import settings
from rest_framework import serializers

from compiler_modules.exceptions import GeometryError
from compiler_modules.geometry import validate_geometry
from compiler_modules.technology import (
    CORNER_NAMES,
    INT_FIELDS,
    SCHEMA_VERSION,
    CalibrationTargets,
    CornerProfile,
    ProfileBundle,
    TechnologyProfile,
)


class GeometrySerializer(serializers.Serializer):
    """
    Memory dimensions.

    Fields:
        M (IntegerField): rows, a power of two >= 2
        N (IntegerField): columns, B times a power of two >= 2
        B (IntegerField): word width, a power of two

    Validation:
        - The triple must pass validate_geometry; the validated data
          carries the MemoryGeometry under "geometry"
    """
    M = serializers.IntegerField(min_value=1, help_text="Number of rows")
    N = serializers.IntegerField(min_value=1, help_text="Number of columns")
    B = serializers.IntegerField(min_value=1, help_text="Word width in bits")

    def validate(self, data):
        try:
            data['geometry'] = validate_geometry(data['M'], data['N'], data['B'])
        except GeometryError as e:
            raise serializers.ValidationError(str(e))
        return data


class GenerateSerializer(GeometrySerializer):
    include_netlist = serializers.BooleanField(
        required=False, default=False, help_text="Include the structural netlist text in the response"
    )


class CharacterizeSerializer(serializers.Serializer):
    """
    Characterization sweep request.

    Fields:
        sizes (ListField): geometries to characterize
        clocks_hz (ListField): clock frequencies in Hz
        corners (ListField, optional): corner names, all four by default
        ratio (FloatField, optional): LRS/HRS ratio for the read tests

    Validation:
        - sizes and clocks_hz must be non-empty
        - sizes x clocks x corners must not exceed RRAM_API_MAX_SWEEP_CELLS
    """
    sizes = serializers.ListField(child=GeometrySerializer(), min_length=1)
    clocks_hz = serializers.ListField(child=serializers.FloatField(min_value=1.0), min_length=1)
    corners = serializers.ListField(
        child=serializers.ChoiceField(choices=CORNER_NAMES), required=False, default=list(CORNER_NAMES)
    )
    ratio = serializers.FloatField(required=False, default=0.3)

    def validate_ratio(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("ratio must be between 0 and 1 (exclusive).")
        return value

    def validate(self, data):
        cells = len(data['sizes']) * len(data['clocks_hz']) * max(1, len(data['corners']))
        if not data['corners']:
            raise serializers.ValidationError("At least one corner must be selected.")
        if cells > settings.RRAM_API_MAX_SWEEP_CELLS:
            raise serializers.ValidationError(
                f"Sweep of {cells} cells exceeds the limit of {settings.RRAM_API_MAX_SWEEP_CELLS}."
            )
        return data


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            unknown = [key for key in data if key not in self.fields]
            if unknown:
                raise serializers.ValidationError({key: ["Unknown field."] for key in unknown})
        return super().to_internal_value(data)


class TechnologySerializer(StrictSerializer):
    """
    The technology section of a profile file.

    One field per TechnologyProfile attribute: integers for the phase
    lengths, floats for everything else. Range invariants stay on the
    dataclass.
    """

    def get_fields(self):
        return {
            f.name: serializers.IntegerField() if f.name in INT_FIELDS else serializers.FloatField()
            for f in fields(TechnologyProfile)
        }


class CornerSerializer(StrictSerializer):
    nmos_strength = serializers.FloatField()
    pmos_strength = serializers.FloatField()
    sense_offset_extra = serializers.FloatField()


class ReferenceLayoutSerializer(StrictSerializer):
    M = serializers.IntegerField(min_value=1)
    N = serializers.IntegerField(min_value=1)
    B = serializers.IntegerField(min_value=1)
    width = serializers.FloatField()
    height = serializers.FloatField()


class DensityAnchorSerializer(StrictSerializer):
    M = serializers.IntegerField(min_value=1)
    N = serializers.IntegerField(min_value=1)
    B = serializers.IntegerField(min_value=1)
    density_mb_mm2 = serializers.FloatField()


def geometry_list_field():
    triple = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=3, max_length=3)
    return serializers.ListField(child=triple, min_length=1)


class CalibrationSerializer(StrictSerializer):
    clock_hz = serializers.FloatField()
    write_pass_geometries = geometry_list_field()
    write_fail_geometries = geometry_list_field()
    reference_layout = ReferenceLayoutSerializer()
    density_anchor = DensityAnchorSerializer()


class ProfileSerializer(StrictSerializer):
    """
    A whole technology profile file.

    Fields:
        schema_version (IntegerField): must equal SCHEMA_VERSION
        provenance (ListField): free-text notes, kept verbatim
        technology (TechnologySerializer): technology values
        corners (DictField): corner name to CornerSerializer, non-empty
        calibration (CalibrationSerializer): calibration targets

    Validation:
        - Unknown keys are rejected at every level
        - save() builds a ProfileBundle; the dataclasses then check the
          profile invariants and raise ProfileValidationError
    """
    schema_version = serializers.IntegerField()
    provenance = serializers.ListField(child=serializers.CharField(allow_blank=True, trim_whitespace=False))
    technology = TechnologySerializer()
    corners = serializers.DictField(child=CornerSerializer(), allow_empty=False)
    calibration = CalibrationSerializer()

    def validate_schema_version(self, value):
        if value != SCHEMA_VERSION:
            raise serializers.ValidationError(f"unsupported schema_version {value}, expected {SCHEMA_VERSION}")
        return value

    def create(self, validated_data):
        cal = validated_data['calibration']
        layout, anchor = cal['reference_layout'], cal['density_anchor']
        return ProfileBundle(
            technology=TechnologyProfile(**validated_data['technology']),
            corners={name: CornerProfile(name=name, **values) for name, values in validated_data['corners'].items()},
            calibration=CalibrationTargets(
                clock_hz=cal['clock_hz'],
                write_pass_geometries=tuple(tuple(g) for g in cal['write_pass_geometries']),
                write_fail_geometries=tuple(tuple(g) for g in cal['write_fail_geometries']),
                reference_layout=(layout['M'], layout['N'], layout['B'], layout['width'], layout['height']),
                density_anchor=(anchor['M'], anchor['N'], anchor['B'], anchor['density_mb_mm2']),
            ),
            provenance=tuple(validated_data['provenance']),
        )
