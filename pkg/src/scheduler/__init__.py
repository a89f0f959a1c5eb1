"""Bucketization of circuits into parallel layers."""

from circuit_ir import flatten

from .bucketizer import bucketize, rebucketize, remove_empty

__all__ = ["bucketize", "flatten", "rebucketize", "remove_empty"]
