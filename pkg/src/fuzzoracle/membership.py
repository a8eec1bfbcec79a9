"""Fuzzy membership shapes.

A shape maps a distance (>= 0) to a membership degree in [0, 1]. All shapes
are non-increasing and return 1 at distance zero. Shapes are identified by
name so they can round-trip through policy files:

* ``linear``    1 - d/width, clipped at 0
* ``quadratic`` (1 - d/width)^2 on [0, width], 0 beyond
* ``indicator`` 1 when d == 0, else 0 (width ignored)

``width`` may be left unset for shapes whose scale is supplied at call time
(the state shape is evaluated against half the minimum reference distance
of whichever policy is in play).
"""

from __future__ import annotations

from dataclasses import dataclass

SHAPE_KINDS = ("linear", "quadratic", "indicator")


@dataclass(frozen=True)
class MembershipShape:
    kind: str
    width: float | None = None

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise ValueError(f"unknown membership shape {self.kind!r}")
        if self.width is not None and not self.width > 0:
            raise ValueError("shape width must be positive")

    def __call__(self, distance: float, width: float | None = None) -> float:
        """Membership degree for ``distance``.

        ``width`` overrides the shape's own width for this evaluation; one
        of the two must be set for scaled shapes.
        """
        if distance < 0:
            raise ValueError("distance must be non-negative")
        if self.kind == "indicator":
            return 1.0 if distance == 0 else 0.0
        w = width if width is not None else self.width
        if w is None or w <= 0:
            raise ValueError(f"shape {self.kind!r} needs a positive width")
        if distance >= w:
            return 0.0
        ramp = 1.0 - distance / w
        if self.kind == "quadratic":
            return ramp * ramp
        return ramp


def make_shape(kind: str, width: float | None = None) -> MembershipShape:
    return MembershipShape(kind, width)
