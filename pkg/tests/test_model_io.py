import numpy as np
import pytest
from constructive_nn.errors import ModelFormatError
from constructive_nn.network import Network, forward, forward_batch
from constructive_nn.runner.model_io import format_model, load_model, parse_model, save_model


def test_round_trip_bit_exact(tmp_path, random_net):
    rng = np.random.default_rng(0)
    for seed, shape in enumerate([(9, 1, 1), (13, 8, 2), (8, 4, 2), (2, 3, 5)]):
        net = random_net(*shape, seed=seed, init_range=3.0)
        # Values without short decimal forms
        net = net.replace(w_in=net.w_in / 3.0)
        fp = save_model(net, tmp_path / f"model_{seed}.txt")
        loaded = load_model(fp)
        assert loaded.same_weights(net)
        X = rng.random((100, shape[0]))
        np.testing.assert_array_equal(forward_batch(loaded, X).output, forward_batch(net, X).output)


def test_layout(random_net):
    net = random_net(input_dim=2, hidden_units=3, output_dim=1)
    lines = format_model(net).splitlines()
    assert lines[0] == "constructive-nn-model 1"
    assert lines[1] == "2 3 1"
    assert len(lines) == 2 + 3 + 1 + 1 + 1
    assert [float(tok) for tok in lines[2].split()] == list(net.w_in[0])
    assert [float(tok) for tok in lines[5].split()] == list(net.b_hidden)


def test_hand_written_zero_model(tmp_path):
    fp = tmp_path / "zero.txt"
    fp.write_text("constructive-nn-model 1\n1 1 1\n0\n0\n0\n0\n")
    net = load_model(fp)
    assert net.shape == "1-1-1"
    for x in [0.0, 0.4, 1.0]:
        assert forward(net, [x]).output[0] == 0.5


def test_negative_zero_survives(tmp_path):
    net = Network(w_in=[[-0.0]], b_hidden=[0.0], w_out=[[1e-300]], b_out=[-1.5])
    loaded = load_model(save_model(net, tmp_path / "m.txt"))
    assert np.signbit(loaded.w_in[0, 0])
    assert loaded.w_out[0, 0] == 1e-300


@pytest.mark.parametrize("text", [
    "constructive-nn-model 2\n1 1 1\n0\n0\n0\n0\n",
    "some-other-format 1\n1 1 1\n0\n0\n0\n0\n",
    "constructive-nn-model 1\n1 0 1\n0\n0\n",
    "constructive-nn-model 1\n1 1 1\n0\n0\n0\n",
    "constructive-nn-model 1\n1 1 1\n0\n0\n0\n0\n0\n",
    "constructive-nn-model 1\n1 1 1\nnan\n0\n0\n0\n",
    "constructive-nn-model 1\n1 1 1\ninf\n0\n0\n0\n",
    "constructive-nn-model 1\n2 1 1\n0\n0\n0\n0\n",
    "constructive-nn-model 1\n1 1 1\nzero\n0\n0\n0\n",
    "constructive-nn-model 1\n",
    "",
])
def test_rejected(text):
    with pytest.raises(ModelFormatError):
        parse_model(text)


def test_missing_file(tmp_path):
    with pytest.raises(ModelFormatError):
        load_model(tmp_path / "absent.txt")
