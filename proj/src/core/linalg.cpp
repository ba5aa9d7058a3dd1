#include "linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "grid.hpp"

namespace pam {

void sym_eig(std::vector<double>& a, std::vector<double>& w, int n) {
    w.assign(size_t(n), 0.0);
    const int info =
        LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', n, a.data(), n, w.data());
    if (info != 0) throw Error("sym_eig: dsyevd failed, info=" + std::to_string(info));
}

void matmul(const double* a, const double* b, double* c, int n) {
    for (int i = 0; i < n; ++i) {
        double* ci = c + size_t(i) * n;
        std::fill(ci, ci + n, 0.0);
        for (int k = 0; k < n; ++k) {
            const double aik = a[size_t(i) * n + k];
            if (aik == 0.0) continue;
            const double* bk = b + size_t(k) * n;
            for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
}

std::vector<double> sym_sqrt(std::vector<double> a, int n) {
    std::vector<double> w;
    sym_eig(a, w, n);  // a now holds eigenvectors: column j = a[i*n+j]
    for (double& x : w) x = std::sqrt(std::max(0.0, x));
    // S = V sqrt(D) V^T
    std::vector<double> vs(size_t(n) * n), s(size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vs[size_t(i) * n + j] = a[size_t(i) * n + j] * w[j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += vs[size_t(i) * n + k] * a[size_t(j) * n + k];
            s[size_t(i) * n + j] = acc;
        }
    return s;
}

} // namespace pam
