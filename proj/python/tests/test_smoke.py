import math

import pytest

aeroflex = pytest.importorskip("aeroflex")


def test_default_config():
    cfg = aeroflex.default_aircraft()
    assert cfg.mass_kg == pytest.approx(227.0)
    assert cfg.n_strips() > 0


def test_trim_and_modes():
    cfg = aeroflex.default_aircraft()
    ac = aeroflex.build_aircraft(cfg, 35.0, 1000.0, True)
    tp = aeroflex.trim_aircraft(ac, 35.0)
    assert tp.residual < 1e-8
    assert -0.2 < tp.alpha < 0.2
    lm = aeroflex.linearize(ac, tp)
    assert lm.A.shape[0] == 9
    modes = aeroflex.modal_analysis(lm, 0)
    assert len(modes) > 0


def test_turbulence_deterministic():
    f1 = aeroflex.generate_turbulence(256.0, 128.0, 2.0, 100.0, 2.0, 7)
    f2 = aeroflex.generate_turbulence(256.0, 128.0, 2.0, 100.0, 2.0, 7)
    assert f1.data == f2.data
    assert math.isfinite(f1.sample(10.0, 20.0))
