#pragma once

// Slot-wise jet propagation rules shared by scalar jets (T = double) and the
// batched network evaluator (T = Eigen array holding one slot for many points).

#include <span>

#include "pinnfem/autodiff/jet.hpp"

namespace pinnfem::ad::kernels {

/// out = f(z) where f[k] holds the k-th derivative of f at z[0].
template <class T>
void compose(const Layout& L, std::span<const T> z, std::span<const T> f, std::span<T> out)
{
    out[0] = f[0];
    switch (L.kind) {
    case JetKind::taylor: {
        const int K = L.order;
        if (K >= 1) out[1] = f[1] * z[1];
        if (K >= 2) out[2] = f[2] * z[1] * z[1] + f[1] * z[2];
        if (K >= 3) out[3] = f[3] * z[1] * z[1] * z[1] + 3.0 * f[2] * z[1] * z[2] + f[1] * z[3];
        if (K >= 4) {
            out[4] = f[4] * z[1] * z[1] * z[1] * z[1] + 6.0 * f[3] * z[1] * z[1] * z[2]
                + f[2] * (4.0 * z[1] * z[3] + 3.0 * z[2] * z[2]) + f[1] * z[4];
        }
        return;
    }
    case JetKind::gradient:
    case JetKind::grad_lap:
    case JetKind::grad_hess: {
        const int d = L.dim;
        for (int i = 1; i <= d; ++i) out[i] = f[1] * z[i];
        if (L.kind == JetKind::grad_lap) {
            T sq = z[1] * z[1];
            for (int i = 2; i <= d; ++i) sq += z[i] * z[i];
            out[d + 1] = f[1] * z[d + 1] + f[2] * sq;
        } else if (L.kind == JetKind::grad_hess) {
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    const int h = L.hessian_slot(i, j);
                    out[h] = f[1] * z[h] + f[2] * z[1 + i] * z[1 + j];
                }
            }
        }
        return;
    }
    }
}

/// Reverse of compose: zbar = (d out / d z)^T abar. f needs compose_terms() + 1 entries.
template <class T>
void compose_adjoint(const Layout& L, std::span<const T> z, std::span<const T> f, std::span<const T> abar,
                     std::span<T> zbar)
{
    switch (L.kind) {
    case JetKind::taylor: {
        const int K = L.order;
        // f shifted by one gives d out_k / d z0.
        T acc = abar[0] * f[1];
        if (K >= 1) acc += abar[1] * (f[2] * z[1]);
        if (K >= 2) acc += abar[2] * (f[3] * z[1] * z[1] + f[2] * z[2]);
        if (K >= 3) acc += abar[3] * (f[4] * z[1] * z[1] * z[1] + 3.0 * f[3] * z[1] * z[2] + f[2] * z[3]);
        if (K >= 4) {
            acc += abar[4] * (f[5] * z[1] * z[1] * z[1] * z[1] + 6.0 * f[4] * z[1] * z[1] * z[2]
                              + f[3] * (4.0 * z[1] * z[3] + 3.0 * z[2] * z[2]) + f[2] * z[4]);
        }
        zbar[0] = acc;
        if (K >= 1) {
            T g = abar[1] * f[1];
            if (K >= 2) g += 2.0 * abar[2] * f[2] * z[1];
            if (K >= 3) g += abar[3] * (3.0 * f[3] * z[1] * z[1] + 3.0 * f[2] * z[2]);
            if (K >= 4) {
                g += abar[4] * (4.0 * f[4] * z[1] * z[1] * z[1] + 12.0 * f[3] * z[1] * z[2] + 4.0 * f[2] * z[3]);
            }
            zbar[1] = g;
        }
        if (K >= 2) {
            T g = abar[2] * f[1];
            if (K >= 3) g += 3.0 * abar[3] * f[2] * z[1];
            if (K >= 4) g += abar[4] * (6.0 * f[3] * z[1] * z[1] + 6.0 * f[2] * z[2]);
            zbar[2] = g;
        }
        if (K >= 3) {
            T g = abar[3] * f[1];
            if (K >= 4) g += 4.0 * abar[4] * f[2] * z[1];
            zbar[3] = g;
        }
        if (K >= 4) zbar[4] = abar[4] * f[1];
        return;
    }
    case JetKind::gradient:
    case JetKind::grad_lap:
    case JetKind::grad_hess: {
        const int d = L.dim;
        T acc = abar[0] * f[1];
        for (int i = 1; i <= d; ++i) {
            acc += f[2] * abar[i] * z[i];
            zbar[i] = f[1] * abar[i];
        }
        if (L.kind == JetKind::grad_lap) {
            const int l = d + 1;
            T sq = z[1] * z[1];
            for (int i = 2; i <= d; ++i) sq += z[i] * z[i];
            acc += abar[l] * (f[2] * z[l] + f[3] * sq);
            for (int i = 1; i <= d; ++i) zbar[i] += 2.0 * f[2] * z[i] * abar[l];
            zbar[l] = f[1] * abar[l];
        } else if (L.kind == JetKind::grad_hess) {
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    const int h = L.hessian_slot(i, j);
                    acc += abar[h] * (f[2] * z[h] + f[3] * z[1 + i] * z[1 + j]);
                    zbar[1 + i] += f[2] * abar[h] * z[1 + j];
                    zbar[1 + j] += f[2] * abar[h] * z[1 + i];
                    zbar[h] = f[1] * abar[h];
                }
            }
        }
        zbar[0] = acc;
        return;
    }
    }
}

inline constexpr double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// out = a * b (Leibniz rule in the jet's layout).
template <class T>
void multiply(const Layout& L, std::span<const T> a, std::span<const T> b, std::span<T> out)
{
    switch (L.kind) {
    case JetKind::taylor:
        for (int k = L.order; k >= 0; --k) {
            T acc = a[k] * b[0];
            for (int j = 1; j <= k; ++j) acc += binomial(k, j) * a[k - j] * b[j];
            out[k] = acc;
        }
        return;
    case JetKind::gradient:
    case JetKind::grad_lap:
    case JetKind::grad_hess: {
        const int d = L.dim;
        if (L.kind == JetKind::grad_lap) {
            T acc = a[0] * b[d + 1] + b[0] * a[d + 1];
            for (int i = 1; i <= d; ++i) acc += 2.0 * a[i] * b[i];
            out[d + 1] = acc;
        } else if (L.kind == JetKind::grad_hess) {
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    const int h = L.hessian_slot(i, j);
                    out[h] = a[0] * b[h] + b[0] * a[h] + a[1 + i] * b[1 + j] + a[1 + j] * b[1 + i];
                }
            }
        }
        for (int i = 1; i <= d; ++i) out[i] = a[0] * b[i] + b[0] * a[i];
        out[0] = a[0] * b[0];
        return;
    }
    }
}

/// bbar = (d (a*b) / d b)^T ybar with a held fixed.
template <class T>
void multiply_adjoint(const Layout& L, std::span<const T> a, std::span<const T> ybar, std::span<T> bbar)
{
    switch (L.kind) {
    case JetKind::taylor:
        for (int j = 0; j <= L.order; ++j) {
            T acc = a[0] * ybar[j];
            for (int k = j + 1; k <= L.order; ++k) acc += binomial(k, j) * a[k - j] * ybar[k];
            bbar[j] = acc;
        }
        return;
    case JetKind::gradient:
    case JetKind::grad_lap:
    case JetKind::grad_hess: {
        const int d = L.dim;
        T acc = a[0] * ybar[0];
        for (int i = 1; i <= d; ++i) {
            acc += a[i] * ybar[i];
            bbar[i] = a[0] * ybar[i];
        }
        if (L.kind == JetKind::grad_lap) {
            const int l = d + 1;
            acc += a[l] * ybar[l];
            for (int i = 1; i <= d; ++i) bbar[i] += 2.0 * a[i] * ybar[l];
            bbar[l] = a[0] * ybar[l];
        } else if (L.kind == JetKind::grad_hess) {
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    const int h = L.hessian_slot(i, j);
                    acc += a[h] * ybar[h];
                    bbar[1 + j] += a[1 + i] * ybar[h];
                    bbar[1 + i] += a[1 + j] * ybar[h];
                    bbar[h] = a[0] * ybar[h];
                }
            }
        }
        bbar[0] = acc;
        return;
    }
    }
}

} // namespace pinnfem::ad::kernels
