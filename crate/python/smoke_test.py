"""Smoke test for the gns_bounds extension module."""

import json
import math

import gns_bounds as gb


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    assert close(gb.a_par(1, 0.0, 2, 2), 1.0)
    assert close(gb.a_par(3, 2.0, "inf", "inf"), 3.0)
    assert close(gb.heat_kernel_norm(0.1, 1, 2), 1.0)
    assert close(gb.min_product_power(1.0, 1.0), 4.0)
    assert close(gb.log_gamma(5.0), math.log(24.0))
    assert close(gb.young_constant(2, "4/3", "4/3", 1), 0.8773826753016616, 1e-9)

    try:
        gb.a_par(2, -1.0, 1, 1)
    except gb.GnsError as e:
        assert "Sobolev endpoint" in str(e)
    else:
        raise AssertionError("endpoint was accepted")

    agmon = gb.GnsProblem(d=1, s=0.0, p="inf", s1=1.0, p1=2, s2=0.0, p2=2)
    assert agmon.validate()["admissible"]
    assert close(agmon.theta(), 0.5)
    assert agmon.known_failure_case() is None

    points = agmon.sample(5, seed=3)
    assert len(points) == 5 and all(pt["value"] > 0 for pt in points)

    cert = gb.minimize(agmon, starts=4, seed=1)
    assert cert.feasible and cert.value >= 1.0
    cert.check()
    again = gb.BoundCertificate.from_json(cert.to_json())
    assert again.to_json() == cert.to_json()
    assert json.loads(cert.to_json())["objective_form"] == "t0_substituted"

    report = gb.check_gns(cert, widths=[1.0], dilations=[0.5, 1.0, 2.0])
    assert report["passed"], report
    assert report["dilation_spread"] < 1e-6

    print(f"agmon bound {cert.value:.6f}, theta {cert.theta}, worst slack {report['worst_slack']:.3f}")
    print("ok")


if __name__ == "__main__":
    main()
