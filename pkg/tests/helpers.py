"""Random valid parameters for the channel families."""
import numpy as np

from covchan.zoo import s3_covariant_kraus


def unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def cyclic_params(rng):
    a = np.array([unit(rng, 3) for _ in range(3)]).T  # unit columns
    return {f"a{n}{m}": a[n, m] for n in range(3) for m in range(3)}


def hadamard_params(rng):
    a = np.array([unit(rng, 3) for _ in range(3)])  # unit rows
    return {f"a{t + 1}{s + 1}": a[t, s] for t in range(3) for s in range(3)}


def pauli_params(rng, d=3):
    p = rng.random(d * d)
    p /= p.sum()
    return {f"p{m}{n}": p[m * d + n] for m in range(d) for n in range(d)}


def u1_params(rng):
    Z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    U = np.linalg.qr(Z)[0]
    v = unit(rng, 3)
    return dict(B00=U[0, 0], B01=U[0, 1], B10=U[1, 0], B11=U[1, 1], b=U[2, 0], c=U[2, 1],
                a=v[0], d=v[1], e=v[2])


def u1u1_params(rng):
    out = {}
    for j in range(3):
        rows = [i for i in range(3) if (i, j) != (0, 0)]
        w = rng.random(len(rows) + 1)
        w /= w.sum()
        out[f"a{j}"] = np.sqrt(w[0]) * np.exp(2j * np.pi * rng.random())
        for i, x in zip(rows, w[1:]):
            out[f"p{i}{j}"] = x
    return out


def s3_symmetric_params(rng):
    abc = unit(rng, 3) / np.sqrt(3)
    def_ = unit(rng, 3) / np.sqrt(6)
    return dict(zip("abcdef", [*abc, *def_]))


def _gram(K):
    return np.einsum("aji,ajk->ik", np.conj(K), K)


def s3_covariant_params(rng):
    """Random point on the trace-preserving manifold.

    The Gram matrix is ``x I + y J`` (J all ones); ``b`` is scaled along a
    random direction to cancel ``y``, then everything is rescaled so x = 1.
    """
    while True:
        a, c, d, e, f, b0 = rng.standard_normal(6) + 1j * rng.standard_normal(6)

        def y(t):
            return _gram(s3_covariant_kraus(a, t * b0, c, d, e, f))[0, 1].real

        c0 = y(0.0)
        c1 = (y(1.0) - y(-1.0)) / 2
        c2 = (y(1.0) + y(-1.0)) / 2 - c0
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0 or abs(c2) < 1e-12:
            continue
        t = (-c1 + np.sqrt(disc)) / (2 * c2)
        vals = [a, t * b0, c, d, e, f]
        x = _gram(s3_covariant_kraus(*vals))[0, 0].real
        return dict(zip("abcdef", [v / np.sqrt(x) for v in vals]))


def sod_params(rng, d=3):
    """Convex mix of identity, mixing and transpose-depolarizing channels."""
    w = rng.random(3)
    w /= w.sum()
    return dict(alpha=w[1] / d + w[2] / (d + 1), beta=w[0], gamma=w[2] / (d + 1))


def valid_params(name, rng):
    return {
        "identity": lambda: {},
        "mixing": lambda: {},
        "transpose": lambda: {},
        "sod": lambda: sod_params(rng),
        "cyclicZ3": lambda: cyclic_params(rng),
        "hadamard3": lambda: hadamard_params(rng),
        "pauli": lambda: pauli_params(rng),
        "symmetric-pauli": lambda: dict(gen=str(rng.choice(["01", "10", "11", "12"])),
                                        **{f"q{i}": x for i, x in enumerate(rng.random(3))}),
        "s3-covariant": lambda: s3_covariant_params(rng),
        "s3-symmetric": lambda: s3_symmetric_params(rng),
        "u1": lambda: u1_params(rng),
        "u1u1": lambda: u1u1_params(rng),
        "su3-8": lambda: {"p": float(rng.uniform(0, 0.75))},
        "su3-6": lambda: {"p": float(rng.uniform(0, 1))},
    }[name]()
