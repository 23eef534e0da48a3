import numpy as np
import pytest

from cauchyquad import geometry as geo
from cauchyquad.portrait import (grid, phase_image, phase_to_rgb, read_ppm,
                                 render_phase_portrait, write_ppm)
from conftest import recipe_result


def test_hue_wheel_for_identity(tmp_path):
    window = (-1, 1, -1, 1)
    phase = render_phase_portrait(lambda z: z, window, (64, 64), tmp_path / "z.ppm")
    img = read_ppm(tmp_path / "z.ppm")
    assert img.shape == (64, 64, 3)
    z = grid(window, (64, 64))
    assert np.allclose(phase, np.angle(z))
    # right: positive real, red; left: negative real, cyan
    assert tuple(img[32, 63]) == (255, 0, 0) or img[32, 63, 0] == 255
    assert img[32, 0, 0] < 40 and img[32, 0, 1] > 215 and img[32, 0, 2] > 215


def test_phase_to_rgb_primaries():
    rgb = phase_to_rgb(np.array([0.0, np.pi, 2 * np.pi / 3, -2 * np.pi / 3]))
    assert rgb.tolist() == [[255, 0, 0], [0, 255, 255], [0, 255, 0], [0, 0, 255]]


def test_phase_to_rgb_matches_colorsys():
    import colorsys
    for ph in np.linspace(-np.pi, np.pi, 37):
        want = colorsys.hsv_to_rgb((ph / (2 * np.pi)) % 1.0, 1.0, 1.0)
        got = phase_to_rgb(np.array([ph]))[0] / 255
        assert np.allclose(got, want, atol=0.5 / 255)


def test_constant_is_uniform(tmp_path):
    render_phase_portrait(lambda z: np.full_like(z, -2.0), (-1, 1, -1, 1), (20, 10),
                          tmp_path / "c.ppm")
    img = read_ppm(tmp_path / "c.ppm")
    assert np.all(img == img[0, 0])


def test_poles_are_black():
    _, img = phase_image(lambda z: 1 / z, (-1, 1, -1, 1), (3, 3))
    assert tuple(img[1, 1]) == (0, 0, 0)


def test_circle_recipe_two_phase_classes(tmp_path):
    r = recipe_result("circle").rational
    window = (-2.5, 2.5, -2.5, 2.5)
    res = (200, 200)
    phase = render_phase_portrait(r, window, res, tmp_path / "p.ppm", shift=0.5)
    z = grid(window, res)
    # winding-number oracle on the unit circle: interior r ~ -1 so
    # r + 1/2 ~ -1/2 (phase pi), exterior r ~ 0 (phase 0)
    interior = geo.inside(np.exp(2j * np.pi * np.arange(400) / 400), z.ravel()).reshape(z.shape)
    cyan = np.abs(np.abs(phase) - np.pi) < 0.1
    red = np.abs(phase) < 0.1
    wrong = (interior & ~cyan) | (~interior & ~red)
    assert wrong.mean() < 0.05


def test_ppm_header_and_determinism(tmp_path):
    f = lambda z: z ** 3 - 1
    for name in ("a.ppm", "b.ppm"):
        render_phase_portrait(f, (-2, 2, -1, 1), (30, 15), tmp_path / name)
    data = (tmp_path / "a.ppm").read_bytes()
    assert data.startswith(b"P6\n30 15\n255\n")
    assert len(data) == len(b"P6\n30 15\n255\n") + 30 * 15 * 3
    assert data == (tmp_path / "b.ppm").read_bytes()


def test_resolution_limits():
    with pytest.raises(ValueError):
        grid((-1, 1, -1, 1), (4097, 4096))
    with pytest.raises(ValueError):
        grid((1, -1, -1, 1), (10, 10))
    with pytest.raises(ValueError):
        write_ppm("unused.ppm", np.zeros((2, 2)))
