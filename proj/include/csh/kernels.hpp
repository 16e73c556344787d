#pragma once

// Dense vector and sparse matrix-vector kernels backing the solvers.
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// variant is compiled in and selected at runtime when the CPU supports it.
// The environment variable CSH_SIMD=scalar|avx2 forces a specific path.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace csh::kernels {

// Compressed-sparse-row square matrix.
struct Csr {
    std::int32_t n = 0;
    std::vector<std::int32_t> row_ptr;  // size n+1
    std::vector<std::int32_t> col;
    std::vector<double> val;
};

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    // sum_i w[i]*x[i]*y[i]; the mu-weighted inner product
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);            // y += a*x
    void (*axpby)(double, const double*, double, double*, std::size_t);   // y = a*x + b*y
    double (*sup_abs)(const double*, std::size_t);
    double (*sup_diff)(const double*, const double*, std::size_t);        // max |x-y|
    double (*min_value)(const double*, std::size_t);                      // requires n >= 1
    void (*spmv)(const Csr&, const double*, double*);
};

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
Isa active_isa();
bool avx2_available();  // compiled in and supported by this CPU

// Table for one specific path; throws std::runtime_error if unavailable.
// Used by the equivalence tests to cross-check variants.
const KernelTable& table(Isa isa);

// Dispatched entry points (route through the active table).
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void axpby(double a, const double* x, double b, double* y, std::size_t n);
double sup_abs(const double* x, std::size_t n);
double sup_diff(const double* x, const double* y, std::size_t n);
double min_value(const double* x, std::size_t n);
void spmv(const Csr& a, const double* x, double* y);

}  // namespace csh::kernels
