#include "csh/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace csh::kernels {

namespace {

// ---------------------------------------------------------------------------
// scalar reference kernels
// ---------------------------------------------------------------------------

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double dot3_scalar(const double* w, const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double a, const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double sup_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

double sup_diff_scalar(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

double min_value_scalar(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, x[i]);
    return m;
}

void spmv_scalar(const Csr& a, const double* x, double* y) {
    for (std::int32_t r = 0; r < a.n; ++r) {
        double s = 0.0;
        for (std::int32_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
}

const KernelTable scalar_table = {
    dot_scalar,     dot3_scalar,     axpy_scalar,      axpby_scalar,
    sup_abs_scalar, sup_diff_scalar, min_value_scalar, spmv_scalar,
};

}  // namespace

#if defined(CSH_HAVE_AVX2_TU)
namespace detail {
const KernelTable& avx2_table();  // defined in kernels_avx2.cpp
}
#endif

bool avx2_available() {
#if defined(CSH_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

const KernelTable& table(Isa isa) {
    if (isa == Isa::scalar) return scalar_table;
#if defined(CSH_HAVE_AVX2_TU)
    if (isa == Isa::avx2 && avx2_available()) return detail::avx2_table();
#endif
    throw std::runtime_error("kernel path not available on this machine: " +
                             std::string(isa_name(isa)));
}

namespace {

Isa pick_isa() {
    if (const char* env = std::getenv("CSH_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_available())
                throw std::runtime_error("CSH_SIMD=avx2 requested but AVX2 is unavailable");
            return Isa::avx2;
        }
        throw std::runtime_error(std::string("unknown CSH_SIMD value: ") + env);
    }
    return avx2_available() ? Isa::avx2 : Isa::scalar;
}

const KernelTable& active_table() {
    static const KernelTable& t = table(pick_isa());
    return t;
}

}  // namespace

Isa active_isa() {
    static const Isa isa = pick_isa();
    return isa;
}

double dot(const double* x, const double* y, std::size_t n) {
    return active_table().dot(x, y, n);
}
double dot3(const double* w, const double* x, const double* y, std::size_t n) {
    return active_table().dot3(w, x, y, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
    active_table().axpy(a, x, y, n);
}
void axpby(double a, const double* x, double b, double* y, std::size_t n) {
    active_table().axpby(a, x, b, y, n);
}
double sup_abs(const double* x, std::size_t n) { return active_table().sup_abs(x, n); }
double sup_diff(const double* x, const double* y, std::size_t n) {
    return active_table().sup_diff(x, y, n);
}
double min_value(const double* x, std::size_t n) { return active_table().min_value(x, n); }
void spmv(const Csr& a, const double* x, double* y) { active_table().spmv(a, x, y); }

}  // namespace csh::kernels
