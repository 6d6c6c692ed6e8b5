"""Independent reference computations used by the tests.

Nothing here goes through the package's differentiation code: floats are
evaluated by Python's ``math`` module, derivatives by central finite
differences, and tensor calculus by sympy.
"""

import math

import numpy as np
import sympy as sp

FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp, "log": math.log,
         "sqrt": math.sqrt, "sinh": math.sinh, "cosh": math.cosh, "pi": math.pi, "e": math.e}


def py_eval(text, env):
    """Evaluate expression text with ``math`` (``^`` becomes ``**``)."""
    return float(eval(text.replace("^", "**"), {"__builtins__": {}}, {**FUNCS, **env}))


def random_expr(rng, names, depth=3):
    """Random expression that is smooth and defined on [-1, 1]^k."""
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.7:
            return str(rng.choice(names))
        return f"{rng.uniform(-2, 2):.3f}"
    a = random_expr(rng, names, depth - 1)
    kind = rng.integers(0, 11)
    if kind < 4:
        b = random_expr(rng, names, depth - 1)
        return f"({a} {['+', '-', '*', '*'][kind]} {b})"
    if kind == 4:
        b = random_expr(rng, names, depth - 1)
        return f"({a} / (1.5 + sin({b})))"
    if kind == 5:
        return f"sin({a})"
    if kind == 6:
        return f"cos({a})"
    if kind == 7:
        return f"exp(0.3 * sin({a}))"
    if kind == 8:
        return f"log(1 + ({a})^2)"
    if kind == 9:
        return f"sqrt(2 + cos({a}))"
    return f"(1 + 0.5 * sin({a}))^{rng.integers(2, 4)}"


def fd_gradient(f, p, h=1e-6):
    p = np.asarray(p, dtype=float)
    g = np.empty(p.size)
    for i in range(p.size):
        e = np.zeros(p.size)
        e[i] = h
        g[i] = (f(p + e) - f(p - e)) / (2 * h)
    return g


def fd_hessian(f, p, h=1e-4):
    p = np.asarray(p, dtype=float)
    n = p.size
    H = np.empty((n, n))
    f0 = f(p)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (f(p + ei) - 2 * f0 + f(p - ei)) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = H[j, i] = (f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)) / (4 * h * h)
    return H


# ---------------------------------------------------------------- sympy


def sym_metric(names, entries):
    """Sympy matrix from a diagonal list or square matrix of expression strings."""
    xs = sp.symbols(names)
    loc = dict(zip(names, xs))
    n = len(names)
    if all(isinstance(e, str) for e in entries):
        g = sp.diag(*[sp.sympify(e.replace("^", "**"), locals=loc) for e in entries])
    else:
        g = sp.Matrix(n, n, lambda i, j: sp.sympify(str(entries[i][j]).replace("^", "**"), locals=loc))
    return xs, g


def metric_derivatives(xs, g):
    """Numeric callables for ``g``, ``dg[k, i, j]`` and ``ddg[k, l, i, j]`` (symbolic differentiation)."""
    n = len(xs)
    dg = [[[sp.diff(g[i, j], xs[k]) for j in range(n)] for i in range(n)] for k in range(n)]
    ddg = [[[[sp.diff(dg[k][i][j], xs[l]) for j in range(n)] for i in range(n)] for l in range(n)]
           for k in range(n)]
    fns = [sp.lambdify(xs, e, "math") for e in (g.tolist(), dg, ddg)]
    return lambda p: tuple(np.array(fn(*[float(v) for v in p]), dtype=float) for fn in fns)


def christoffel_classical(g, dg):
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    G = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                G[k, i, j] = 0.5 * sum(ginv[k, l] * (dg[j, l, i] + dg[i, l, j] - dg[l, i, j]) for l in range(n))
    return G


def riemann_classical(g, dg, ddg):
    """Fully covariant tensor from the second-derivative formula.

    ``T[i,k,l,m] = 1/2 (d_k d_l g_im + d_i d_m g_kl - d_k d_m g_il - d_i d_l g_km)
    + g_np (G^n_kl G^p_im - G^n_km G^p_il)``; on the unit sphere ``T[0,1,0,1] > 0``.
    """
    n = g.shape[0]
    G = christoffel_classical(g, dg)
    T = np.zeros((n, n, n, n))
    for i in range(n):
        for k in range(n):
            for l in range(n):
                for m in range(n):
                    t = 0.5 * (ddg[k, l, i, m] + ddg[i, m, k, l] - ddg[k, m, i, l] - ddg[i, l, k, m])
                    for a in range(n):
                        for b in range(n):
                            t += g[a, b] * (G[a, k, l] * G[b, i, m] - G[a, k, m] * G[b, i, l])
                    T[i, k, l, m] = t
    return T


def laplace_beltrami(xs, g, f):
    """Divergence-form ``(1/sqrt|g|) d_i (sqrt|g| g^ij d_j f)`` (the analyst's sign)."""
    n = len(xs)
    ginv = g.inv(method="LU")
    rt = sp.sqrt(g.det(method="berkowitz"))
    return sum(sp.diff(rt * sum(ginv[i, j] * sp.diff(f, xs[j]) for j in range(n)), xs[i])
               for i in range(n)) / rt


def numeric(expr, xs, p):
    """Evaluate a sympy expression (or nested list of them) at ``p``."""
    return np.array(sp.lambdify(xs, expr, "math")(*[float(v) for v in p]), dtype=float)
