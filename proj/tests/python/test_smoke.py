import math

import numpy as np
import pytest

import relunet


def test_square_two_intervals_attains_bound():
    f = relunet.make_target("poly", coeffs=[0, 0, 1])
    d = relunet.uniform_division(2, 1.0)
    net = relunet.build_network(f, d)
    assert len(net) == 3
    assert net(1.0) == 1.5
    assert relunet.error_bound(f, d).bound == 0.5
    assert relunet.sup_error(f, net, 1025).max_error == 0.5


def test_vectorized_evaluation_matches_scalar():
    f = relunet.make_target("sin", {"M": 2})
    net = relunet.build_network(f, relunet.uniform_division(64, f.domain_length))
    xs = np.linspace(0, f.domain_length, 101)
    np.testing.assert_array_equal(net.evaluate(xs), [net(float(x)) for x in xs])
    with pytest.raises(relunet.DimensionError):
        net.evaluate(np.zeros((3, 2)))


def test_fold_and_spectrum():
    f = relunet.make_target("sin", {"M": 2})
    net = relunet.build_network(f, relunet.uniform_division(600, f.domain_length))
    c = relunet.fold_to_canonical(net, f.domain_length)
    for x in np.linspace(0, f.domain_length, 17):
        assert abs(c(float(x)) - net(float(x))) <= 1e-10
    s = relunet.extract_spectrum(net, 2 * math.pi / 50, 2 * math.pi)
    assert s.bins == 50
    assert all(v == 0.0 for v in s.b_minus)
    assert relunet.compare_spectrum(s, f).correlation >= 0.99


def test_training_is_deterministic():
    data = relunet.sample_dataset("sin", 500, 3, {"M": 3})
    cfg = relunet.TrainConfig()
    cfg.units = 20
    cfg.epochs = 5
    cfg.seed = 1
    a = relunet.train(data, cfg)
    b = relunet.train(data, cfg)
    assert not a.failed
    assert a.network == b.network
    assert len(a.loss_curve) == 5
    assert a.max_error >= 0 and a.mse >= 0


def test_checkpoint_round_trip(tmp_path):
    net = relunet.Network(2, 0.25)
    net.add_unit(relunet.Unit([1.0 / 3, -2.0], 0.1, 7.0))
    assert relunet.checkpoint_from_string(relunet.checkpoint_to_string(net)) == net
    path = tmp_path / "net.json"
    relunet.save_checkpoint(net, path)
    assert relunet.load_checkpoint(path) == net


def test_errors_map_to_python_exceptions():
    with pytest.raises(relunet.LookupError):
        relunet.make_target("nope")
    with pytest.raises(ValueError):
        relunet.uniform_division(0, 1.0)
    with pytest.raises(relunet.DimensionError):
        relunet.build_network(relunet.make_target("gauss2"), relunet.uniform_division(4, 10.0))
