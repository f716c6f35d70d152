import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special, stats

from haarmat.rng import RngStream
from haarmat.sampler import sample_haar_unitary
from haarmat.spectra import (
    TWO_PI,
    EigenphaseSet,
    GofReport,
    NotUnitaryError,
    PairingError,
    chi_square_uniform,
    dedup_kramers,
    density_histogram,
    eigenphases,
    histogram,
    kolmogorov_sf,
    ks_test,
    ks_two_sample,
    spacing_histogram,
    spacings,
    surmise_bin_average,
    wigner_surmise,
)


def test_identity_phases_are_zero():
    assert np.array_equal(eigenphases(np.eye(4)).phases, np.zeros(4))


def test_diag_i_minus_i():
    th = eigenphases(np.diag([1j, -1j])).phases
    assert np.allclose(th, [np.pi / 2, 3 * np.pi / 2], atol=1e-15)


def test_cue_eigenvalues_on_circle():
    U = sample_haar_unitary(50, RngStream(1))
    e = eigenphases(U)
    lam = np.linalg.eigvals(U)
    assert np.max(np.abs(np.abs(lam) - 1)) < 1e-12
    assert e.n == 50 and e.max_residual < 1e-12
    assert np.all((e.phases >= 0) & (e.phases < TWO_PI))


def test_rotation_shifts_phases():
    U = sample_haar_unitary(10, RngStream(2))
    a = 0.7
    th = eigenphases(U).phases
    th2 = eigenphases(np.exp(1j * a) * U).phases
    expected = np.sort(np.mod(th + a, TWO_PI))
    d = np.abs(th2 - expected)
    assert np.max(np.minimum(d, TWO_PI - d)) < 1e-10


def test_not_unitary():
    with pytest.raises(NotUnitaryError):
        eigenphases(2 * np.eye(3))
    with pytest.raises(NotUnitaryError):
        eigenphases(np.ones((2, 3)))


def test_spacings_examples():
    s = spacings(np.array([0.0, np.pi])).s
    assert np.allclose(s, [1.0, 1.0])
    th = np.array([0.1, 0.2, 3.0, 5.5])
    s = spacings(th).s
    assert np.allclose(s, 4 / TWO_PI * np.array([0.1, 2.8, 2.5, TWO_PI - 5.4]))
    with pytest.raises(ValueError):
        spacings(np.array([1.0]))


@given(st.lists(st.floats(0, TWO_PI, exclude_max=True), min_size=2, max_size=40))
def test_spacings_sum_to_n(th):
    s = spacings(np.array(th)).s
    assert np.all(s >= 0)
    assert abs(s.sum() - len(th)) < 1e-9 * len(th)


def test_histogram_examples():
    h = histogram([0.1, 0.2, 0.6, 1.5, -0.1], 2, 0.0, 1.0)
    assert h.counts.tolist() == [2, 1]
    assert np.allclose(h.density, [4 / 3, 2 / 3])
    h = density_histogram(np.array([0.0, np.pi]), 2)
    assert h.counts.tolist() == [1, 1]
    with pytest.raises(ValueError):
        histogram([], 3, 0, 1)


@given(st.lists(st.floats(0, 4, exclude_max=True), min_size=1, max_size=200), st.integers(1, 30))
def test_histogram_integrates_to_one(vals, bins):
    h = spacing_histogram(np.array(vals), bins, 4.0)
    assert abs(np.sum(h.density * h.widths) - 1) < 1e-12
    assert h.total == len(vals)


def test_histogram_merge():
    a = histogram([0.1, 0.2], 2, 0, 1)
    b = histogram([0.7], 2, 0, 1)
    assert a.merge(b).counts.tolist() == [2, 1]
    with pytest.raises(ValueError):
        a.merge(histogram([0.1], 3, 0, 1))


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_surmise_normalised_with_unit_mean(beta):
    norm = integrate.quad(wigner_surmise, 0, np.inf, args=(beta,))[0]
    mean = integrate.quad(lambda s: s * wigner_surmise(s, beta), 0, np.inf)[0]
    assert abs(norm - 1) < 1e-10
    assert abs(mean - 1) < 1e-10


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_surmise_constants_from_gamma(beta):
    # unit mean fixes b, unit mass then fixes a
    b = (special.gamma((beta + 2) / 2) / special.gamma((beta + 1) / 2)) ** 2
    a = 2 * b ** ((beta + 1) / 2) / special.gamma((beta + 1) / 2)
    s = np.linspace(0, 3, 7)
    assert np.allclose(wigner_surmise(s, beta), a * s**beta * np.exp(-b * s * s), rtol=1e-12)


def test_surmise_bad_beta():
    with pytest.raises(ValueError):
        wigner_surmise(1.0, 3)


def test_surmise_bin_average():
    edges = np.linspace(0, 4, 51)
    avg = surmise_bin_average(edges, 2)
    assert abs(np.sum(avg * np.diff(edges)) - integrate.quad(wigner_surmise, 0, 4, args=(2,))[0]) < 1e-12


def test_ks_grid():
    n = 100
    x = (np.arange(n) + 0.5) / n
    assert abs(ks_test(x, lambda t: t).ks_statistic - 1 / (2 * n)) < 1e-14
    assert ks_test(np.zeros(10), lambda t: np.clip(t, 0, 1) * 0 + (t > 0)).ks_statistic == 1.0


def test_ks_all_mass_at_zero():
    assert ks_test(np.zeros(10), lambda t: t).ks_statistic == 1.0


@pytest.mark.parametrize("x", [0.2, 0.5, 0.8, 1.0, 1.36, 2.0, 3.0])
def test_kolmogorov_sf_matches_scipy(x):
    assert abs(kolmogorov_sf(x) - special.kolmogorov(x)) < 1e-12


def test_kolmogorov_sf_small():
    assert kolmogorov_sf(0.0) == 1.0
    assert kolmogorov_sf(0.1) == 1.0


def test_ks_two_sample_against_scipy():
    g = np.random.default_rng(0)
    x, y = g.normal(size=3000), g.normal(0.05, size=2500)
    ours = ks_two_sample(x, y)
    ref = stats.ks_2samp(x, y, method="asymp")
    assert abs(ours.ks_statistic - ref.statistic) < 1e-14
    assert abs(ours.ks_p_value - ref.pvalue) < 1e-3


def test_chi_square_flat_and_concentrated():
    edges = np.linspace(0, 1, 61)
    flat = histogram((np.arange(600) + 0.5) / 600, 60, 0, 1)
    rep = chi_square_uniform(flat)
    assert rep.chi_square < 1e-20 and rep.chi_square_dof == 59 and rep.chi_square_p_value == 1.0
    one = histogram(np.full(600, 0.001), 60, 0, 1)
    assert np.array_equal(one.bin_edges, edges)
    # 59 empty bins of 10 expected plus one bin with 590 excess
    assert abs(chi_square_uniform(one).chi_square - 35400.0) < 1e-9


def test_chi_square_undersampled():
    with pytest.raises(ValueError, match="undersampled"):
        chi_square_uniform(histogram([0.1, 0.5], 10, 0, 1))


def test_dedup_kramers():
    e = dedup_kramers(np.array([0.5, 0.5, 2.0, 2.0]))
    assert np.allclose(e.phases, [0.5, 2.0])
    # pair straddling the cut
    e = dedup_kramers(np.array([1e-12, 1.0, 1.0, TWO_PI - 1e-12]))
    assert len(e.phases) == 2 and np.isclose(e.phases[0], 1.0)
    with pytest.raises(PairingError):
        dedup_kramers(np.array([0.1, 0.2, 0.3, 0.4]))
    with pytest.raises(PairingError):
        dedup_kramers(np.array([0.1, 0.1, 0.3]))


def test_gof_report_update_and_dict():
    r = GofReport(ks_statistic=0.1, ks_p_value=0.5)
    r.update(GofReport(chi_square=3.0, chi_square_dof=4, chi_square_p_value=0.6, extra={"k": 1}))
    d = r.to_dict()
    assert d["ks_statistic"] == 0.1 and d["chi_square_dof"] == 4 and d["k"] == 1
    assert GofReport().to_dict()["chi_square"] is None


def test_eigenphase_set_n():
    assert EigenphaseSet(np.zeros(3)).n == 3
