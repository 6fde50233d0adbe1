import numpy as np

from smalldev.linalg import HermitianMatrix


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianMatrix:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return HermitianMatrix(scale * (a + a.conj().T) / 2.0)


def random_pd(d: int, rng: np.random.Generator) -> HermitianMatrix:
    """Random positive definite matrix with eigenvalues bounded away from 0."""
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return HermitianMatrix(a @ a.conj().T + 0.5 * d * np.eye(d))


def frobenius(entries: np.ndarray) -> float:
    return float(np.linalg.norm(entries, "fro"))


def pytest_runtest_logreport(report):
    # One visible verdict line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {verdict}", flush=True)
