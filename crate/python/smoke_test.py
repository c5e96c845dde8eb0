"""Quick check of the Python bindings against known values."""

import math

import divisor_lab_py as dl


def main():
    assert dl.divisor_sum(10) == 27
    assert dl.divisor_sum(100) == 482
    d, main_term, delta = dl.delta(100)
    assert d == 482 and abs(delta - 6.0398) < 1e-3
    assert dl.tau(12) == 6
    assert dl.tau_range(1, 6) == [1, 2, 2, 3, 2, 4]
    assert dl.lattice_count(4.5) == 8

    assert dl.rho(0.25) == 0.25
    assert abs(dl.rho1(0.0, 0.1)) < 1e-15

    # (u + 1/2) v = 3: 2u + 1 divides 6
    assert dl.shifted_lattice(3, 1, 2) == [(1, 2)]

    a, q, err = dl.approx_1d(math.pi - 3, 1000.0)
    assert (a, q) == (16, 113) and err < 1 / (q * 1000.0)
    s = dl.approx_2d(0.1234, 0.5678, 100.0)
    assert s.valid and s.q <= (1 + 10) ** 2

    v = dl.i_pm(0, 0, 10.0, 1e4)
    assert abs(v - 11) < 1e-9
    assert dl.i_pm_stationary(1, 1, 100.0, 150.5**2) is not None

    w = [0.0] * 25
    w[3] = 0.1
    mv = dl.mean_value(100.0, w)
    assert abs(mv.direct - mv.parseval) <= mv.tail_bound + 1e-9

    try:
        dl.divisor_sum(0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for x = 0")

    rows = dl.scan_range(1, 100, workers=2)
    assert len(rows) == 100 and rows[-1][1] == 482
    passed, cases, failures = dl.run_suite("lemma7", seed=42, cases=200)
    assert passed == cases == 200 and not failures
    print("smoke test ok")


if __name__ == "__main__":
    main()
