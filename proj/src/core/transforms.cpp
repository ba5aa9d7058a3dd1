#include "transforms.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace pam::tf {

namespace {

enum class Kind { Dct1, Dst1, R2c, C2r };

// count > 1 only used by Dst1 (batched applies in the eigensolver)

struct Key {
    Kind kind;
    int n1, n2, count = 1;
    bool operator<(const Key& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (n1 != o.n1) return n1 < o.n1;
        if (n2 != o.n2) return n2 < o.n2;
        return count < o.count;
    }
};

// A plan bound to its own scratch buffers. Leased to one caller at a time.
struct Entry {
    fftw_plan plan = nullptr;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    size_t rn = 0, cn = 0;

    ~Entry() {
        if (plan) fftw_destroy_plan(plan);
        if (rbuf) fftw_free(rbuf);
        if (cbuf) fftw_free(cbuf);
    }
};

std::mutex g_mutex;
std::map<Key, std::vector<std::unique_ptr<Entry>>> g_pool;

std::unique_ptr<Entry> make_entry(const Key& k) {
    auto e = std::make_unique<Entry>();
    switch (k.kind) {
        case Kind::Dct1:
        case Kind::Dst1: {
            e->rn = size_t(k.n1) * k.n2 * k.count;
            e->rbuf = fftw_alloc_real(e->rn);
            const fftw_r2r_kind rk = (k.kind == Kind::Dct1) ? FFTW_REDFT00 : FFTW_RODFT00;
            if (k.count == 1) {
                e->plan =
                    fftw_plan_r2r_2d(k.n1, k.n2, e->rbuf, e->rbuf, rk, rk, FFTW_ESTIMATE);
            } else {
                const int dims[2] = {k.n1, k.n2};
                const fftw_r2r_kind kinds[2] = {rk, rk};
                e->plan = fftw_plan_many_r2r(2, dims, k.count, e->rbuf, nullptr, 1,
                                             k.n1 * k.n2, e->rbuf, nullptr, 1, k.n1 * k.n2,
                                             kinds, FFTW_ESTIMATE);
            }
            break;
        }
        case Kind::R2c: {
            e->rn = size_t(k.n1) * k.n2;
            e->cn = size_t(k.n1) * (k.n2 / 2 + 1);
            e->rbuf = fftw_alloc_real(e->rn);
            e->cbuf = fftw_alloc_complex(e->cn);
            e->plan = fftw_plan_dft_r2c_2d(k.n1, k.n2, e->rbuf, e->cbuf, FFTW_ESTIMATE);
            break;
        }
        case Kind::C2r: {
            e->rn = size_t(k.n1) * k.n2;
            e->cn = size_t(k.n1) * (k.n2 / 2 + 1);
            e->rbuf = fftw_alloc_real(e->rn);
            e->cbuf = fftw_alloc_complex(e->cn);
            e->plan = fftw_plan_dft_c2r_2d(k.n1, k.n2, e->cbuf, e->rbuf, FFTW_ESTIMATE);
            break;
        }
    }
    return e;
}

struct Lease {
    Key key;
    std::unique_ptr<Entry> entry;

    explicit Lease(const Key& k) : key(k) {
        std::lock_guard<std::mutex> lock(g_mutex);
        auto& v = g_pool[k];
        if (!v.empty()) {
            entry = std::move(v.back());
            v.pop_back();
        } else {
            entry = make_entry(k);  // planner is not thread-safe; stay under the lock
        }
    }
    ~Lease() {
        std::lock_guard<std::mutex> lock(g_mutex);
        g_pool[key].push_back(std::move(entry));
    }
};

} // namespace

void dct1_2d(const double* in, double* out, int n1, int n2) {
    Lease l(Key{Kind::Dct1, n1, n2, 1});
    std::memcpy(l.entry->rbuf, in, l.entry->rn * sizeof(double));
    fftw_execute(l.entry->plan);
    std::memcpy(out, l.entry->rbuf, l.entry->rn * sizeof(double));
}

void dst1_2d(const double* in, double* out, int n1, int n2) {
    Lease l(Key{Kind::Dst1, n1, n2, 1});
    std::memcpy(l.entry->rbuf, in, l.entry->rn * sizeof(double));
    fftw_execute(l.entry->plan);
    std::memcpy(out, l.entry->rbuf, l.entry->rn * sizeof(double));
}

void fft2_r2c(const double* in, std::complex<double>* out, int n) {
    Lease l(Key{Kind::R2c, n, n, 1});
    std::memcpy(l.entry->rbuf, in, l.entry->rn * sizeof(double));
    fftw_execute(l.entry->plan);
    std::memcpy(static_cast<void*>(out), l.entry->cbuf, l.entry->cn * sizeof(fftw_complex));
}

void fft2_c2r(const std::complex<double>* in, double* out, int n) {
    Lease l(Key{Kind::C2r, n, n, 1});
    std::memcpy(l.entry->cbuf, static_cast<const void*>(in), l.entry->cn * sizeof(fftw_complex));
    fftw_execute(l.entry->plan);
    const double s = 1.0 / (double(n) * double(n));
    for (size_t i = 0; i < l.entry->rn; ++i) out[i] = l.entry->rbuf[i] * s;
}

void dst1_2d_many(const double* in, double* out, int n1, int n2, int count) {
    Lease l(Key{Kind::Dst1, n1, n2, count});
    std::memcpy(l.entry->rbuf, in, l.entry->rn * sizeof(double));
    fftw_execute(l.entry->plan);
    std::memcpy(out, l.entry->rbuf, l.entry->rn * sizeof(double));
}

void clear_plan_cache() {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_pool.clear();
}

} // namespace pam::tf
