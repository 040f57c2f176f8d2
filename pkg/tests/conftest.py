"""Shared fixtures: root parameters and cached braiding providers."""

from __future__ import annotations

import json

import numpy as np
import pytest

from holoinv.braiding import BraidingProvider
from holoinv.diagram import Diagram, braid_diagram, closure
from holoinv.params import root_params
from holoinv.quandle import QColor, propagate_qcolors, random_sl2, z_candidates
from holoinv.sl2factor import psi, random_ycolor


@pytest.fixture(scope="session")
def providers():
    """One braiding provider per desk-scale ell, shared across tests."""
    return {ell: BraidingProvider(root_params(ell)) for ell in (3, 4)}


def unknot_diagram(q: QColor) -> Diagram:
    d = Diagram([], [(0, "coevL"), (0, "evR")])
    return d.with_colors({d.edges()[0]: q})


def commuting_link(ell: int, word, seed: int = 11) -> Diagram:
    """Closure of a 2-strand braid whose strands share one holonomy axis.

    Components of a braid closure in the torus have commuting holonomies,
    so both strands carry the same SL2 matrix with independent z choices.
    """
    p = root_params(ell)
    rng = np.random.default_rng(seed)
    g = random_sl2(rng)
    zs = z_candidates(np.trace(g), p)
    a, b = QColor(g, zs[0]), QColor(g, zs[-1])
    return closure(propagate_qcolors(braid_diagram(2, word), [a, b]))


def random_unknot_qcolor(ell: int, seed: int = 0) -> QColor:
    p = root_params(ell)
    rng = np.random.default_rng(seed)
    y = random_ycolor(rng, p)
    return QColor(psi(y.g), y.z)


def write_link_file(path, ell: int, word, seed: int = 11) -> None:
    p = root_params(ell)
    rng = np.random.default_rng(seed)
    g = random_sl2(rng)
    zs = z_candidates(np.trace(g), p)

    def cp(z):
        z = complex(z)
        return [z.real, z.imag]

    def mat(m):
        return [[cp(m[0, 0]), cp(m[0, 1])], [cp(m[1, 0]), cp(m[1, 1])]]

    doc = {
        "ell": ell,
        "braid": {"strands": 2, "word": list(word)},
        "colors": [{"g": mat(g), "z": cp(zs[0])}, {"g": mat(g), "z": cp(zs[-1])}],
    }
    with open(path, "w") as f:
        json.dump(doc, f)
