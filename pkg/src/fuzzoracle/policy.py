"""Intended policies: finite maps from reference states to ideal actions.

An intended policy is the oracle's probe. It pairs a handful of reference
states with the actions a correct learner should take there, and carries
the metrics and membership shapes used to score how closely visited
(state, action) pairs comply with it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateReferenceStateError, PolicyTooSmallError
from .membership import MembershipShape
from .spaces import BoxSpace, DiscreteSpace, GridSpace, continuous_action_distance


def min_reference_distance(ref_states, metric) -> float:
    """Minimum pairwise distance among reference states.

    ``metric`` is any symmetric distance callable. Raises
    PolicyTooSmallError for fewer than two states and
    DuplicateReferenceStateError when two states coincide under the metric.
    """
    if len(ref_states) < 2:
        raise PolicyTooSmallError(
            f"need at least 2 reference states, got {len(ref_states)}"
        )
    best = None
    for i in range(len(ref_states)):
        for j in range(i + 1, len(ref_states)):
            d = metric(ref_states[i], ref_states[j])
            if d == 0:
                raise DuplicateReferenceStateError(
                    f"reference states {i} and {j} coincide"
                )
            if best is None or d < best:
                best = d
    return best


@dataclass(frozen=True)
class IntendedPolicy:
    """Reference states, their ideal actions, and the scoring apparatus.

    ``entries`` is an ordered tuple of (reference state, ideal action)
    pairs. ``min_ref_distance`` caches the minimum pairwise state distance;
    use :meth:`build` to compute and validate it.
    """

    entries: tuple
    state_space: GridSpace | BoxSpace
    action_space: DiscreteSpace | BoxSpace
    state_shape: MembershipShape = field(default=MembershipShape("linear"))
    action_shape: MembershipShape | None = None
    min_ref_distance: float = 0.0

    @classmethod
    def build(
        cls,
        entries,
        state_space,
        action_space,
        state_shape=MembershipShape("linear"),
        action_shape=None,
    ) -> "IntendedPolicy":
        """Validate entries, derive defaults, and cache the reference gap.

        The default action shape is the exact-match indicator for discrete
        action spaces and a linear ramp scaled by the space diameter for
        continuous ones.
        """
        entries = tuple((state, action) for state, action in entries)
        for state, action in entries:
            if not state_space.contains(state):
                raise ValueError(f"reference state {state!r} outside the state space")
            if not action_space.contains(action):
                raise ValueError(f"ideal action {action!r} outside the action space")
        delta = min_reference_distance(
            [s for s, _ in entries], state_space.distance
        )
        if action_shape is None:
            if isinstance(action_space, DiscreteSpace):
                action_shape = MembershipShape("indicator")
            else:
                action_shape = MembershipShape("linear", width=action_space.diameter)
        return cls(
            entries=entries,
            state_space=state_space,
            action_space=action_space,
            state_shape=state_shape,
            action_shape=action_shape,
            min_ref_distance=delta,
        )

    def __len__(self) -> int:
        return len(self.entries)

    def state_distance(self, a, b) -> float:
        return self.state_space.distance(a, b)

    def action_distance(self, a, b) -> float:
        if isinstance(self.action_space, DiscreteSpace):
            return self.action_space.distance(a, b)
        return continuous_action_distance(a, b)

    def ideal_action(self, entry_index: int):
        return self.entries[entry_index][1]


def closest_reference(state, policy: IntendedPolicy) -> tuple[int, float]:
    """Index and distance of the reference state nearest to ``state``.

    Ties break toward the lowest entry index so repeated runs stay
    reproducible; distance comparison is exact.
    """
    best_index = 0
    best_distance = policy.state_distance(state, policy.entries[0][0])
    for i in range(1, len(policy.entries)):
        d = policy.state_distance(state, policy.entries[i][0])
        if d < best_distance:
            best_index = i
            best_distance = d
    return best_index, best_distance
