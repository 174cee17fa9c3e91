# File: backend/tests/unit/test_geometry.py
# Purpose: Mode functions of the one-dimensional cavity and the equal-magnitude position solver.
import math

import pytest

from app.core.errors import InvalidParameterError
from app.core.geometry import (
    coupling_signs,
    scaled_coupling,
    solve_position,
    symmetric_pairs,
    two_atom_positions,
)

# sin(pi r) = -+ 1/(2 sqrt 2) for modes 1 and 2
FIRST_MODE_ROOT = math.asin(1 / (2 * math.sqrt(2))) / math.pi


class TestScaledCoupling:
    def test_mirrors_are_nodes(self):
        assert scaled_coupling(1, 0.5) == pytest.approx(0.0, abs=1e-15)
        assert scaled_coupling(1, -0.5) == pytest.approx(0.0, abs=1e-15)

    def test_centre_antinode_of_first_mode(self):
        assert scaled_coupling(1, 0.0) == pytest.approx(math.sqrt(math.pi))

    def test_outside_cavity(self):
        with pytest.raises(InvalidParameterError):
            scaled_coupling(1, 0.6)

    def test_mode_index(self):
        with pytest.raises(InvalidParameterError):
            scaled_coupling(0, 0.1)


class TestSolvePosition:
    def test_first_pair_of_modes(self):
        (equal,) = solve_position(1, "equal")
        (opposite,) = solve_position(1, "opposite")
        assert equal.r_tilde == pytest.approx(-FIRST_MODE_ROOT, abs=1e-12)
        assert opposite.r_tilde == pytest.approx(FIRST_MODE_ROOT, abs=1e-12)
        assert FIRST_MODE_ROOT == pytest.approx(0.115027, abs=1e-6)

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("sign", ["equal", "opposite"])
    def test_roots_satisfy_condition(self, n, sign):
        roots = solve_position(n, sign)
        assert roots
        for root in roots:
            assert root.residual < 1e-12
            assert root.sign == sign
            assert abs(scaled_coupling(n, root.r_tilde)) == pytest.approx(abs(scaled_coupling(n + 1, root.r_tilde)))

    def test_sign_of_couplings(self):
        assert coupling_signs(-FIRST_MODE_ROOT, 1) == 1
        assert coupling_signs(FIRST_MODE_ROOT, 1) == -1

    def test_bad_sign(self):
        with pytest.raises(InvalidParameterError):
            solve_position(1, "both")


class TestTwoAtomPlacement:
    def test_mirror_pair(self):
        first, second = two_atom_positions(1)
        assert first.sign == "opposite"
        assert second.sign == "equal"
        assert first.r_tilde == pytest.approx(-second.r_tilde, abs=1e-12)

    def test_pairs_sorted_from_centre(self):
        pairs = symmetric_pairs(2)
        distances = [abs(first.r_tilde) for first, _ in pairs]
        assert distances == sorted(distances)

    def test_pair_chosen_by_index(self):
        pairs = symmetric_pairs(2)
        assert [two_atom_positions(2, index=i) for i in range(len(pairs))] == pairs
        with pytest.raises(InvalidParameterError):
            two_atom_positions(2, index=len(pairs))
        with pytest.raises(InvalidParameterError):
            two_atom_positions(1, index=-1)
