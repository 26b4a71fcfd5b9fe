#include <mpfr.h>

#include <cmath>
#include <string>
#include <vector>

#include "dnscatter/errors.hpp"
#include "dnscatter/matcher.hpp"

namespace dnscatter {

namespace {

// Owning array of MPFR numbers at a fixed precision.
class MpVec {
public:
    MpVec(std::size_t n, mpfr_prec_t prec) : v_(n) {
        for (auto& x : v_) mpfr_init2(&x, prec);
    }
    ~MpVec() {
        for (auto& x : v_) mpfr_clear(&x);
    }
    MpVec(const MpVec&) = delete;
    MpVec& operator=(const MpVec&) = delete;

    mpfr_ptr operator[](std::size_t i) { return &v_[i]; }

private:
    std::vector<__mpfr_struct> v_;
};

struct MinEig {
    bool ok = false;
    double lambda = 0.0;
    double eps = 0.0;
    double one_minus_eps = 0.0;
};

// Smallest eigenvalue of I - O O^T (= 1 - eps^2) by Cholesky and inverse
// iteration at `bits` of precision. ok=false when a pivot is not positive,
// i.e. the precision cannot resolve the matrix.
MinEig min_eig_tail(int N, mpfr_prec_t bits) {
    const auto n = static_cast<std::size_t>(N);
    const mpfr_rnd_t rnd = MPFR_RNDN;
    MpVec O(n * n, bits);
    MpVec L(n * n, bits);  // lower triangle, row-major
    MpVec x(n, bits);
    MpVec y(n, bits);
    MpVec tmp(4, bits);
    mpfr_ptr pi = tmp[0];
    mpfr_ptr acc = tmp[1];
    mpfr_ptr a = tmp[2];
    mpfr_ptr b = tmp[3];

    mpfr_const_pi(pi, rnd);
    for (int i = 1; i <= N; ++i) {
        for (int j = 1; j <= N; ++j) {
            // (2/pi) / L with L the odd one of i+j-1, i-j.
            const long Lval = ((i + j - 1) % 2 != 0) ? (i + j - 1) : (i - j);
            mpfr_mul_si(a, pi, Lval, rnd);
            mpfr_si_div(O[(i - 1) * n + (j - 1)], 2, a, rnd);
        }
    }

    // G = I - O O^T, lower triangle into L, then factor in place.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            mpfr_set_ui(acc, 0, rnd);
            for (std::size_t m = 0; m < n; ++m) {
                mpfr_fma(acc, O[i * n + m], O[j * n + m], acc, rnd);
            }
            mpfr_ui_sub(L[i * n + j], i == j ? 1 : 0, acc, rnd);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        mpfr_set_ui(acc, 0, rnd);
        for (std::size_t m = 0; m < j; ++m) mpfr_fma(acc, L[j * n + m], L[j * n + m], acc, rnd);
        mpfr_sub(acc, L[j * n + j], acc, rnd);
        if (mpfr_sgn(acc) <= 0) return {};
        mpfr_sqrt(L[j * n + j], acc, rnd);
        for (std::size_t i = j + 1; i < n; ++i) {
            mpfr_set_ui(acc, 0, rnd);
            for (std::size_t m = 0; m < j; ++m) mpfr_fma(acc, L[i * n + m], L[j * n + m], acc, rnd);
            mpfr_sub(acc, L[i * n + j], acc, rnd);
            mpfr_div(L[i * n + j], acc, L[j * n + j], rnd);
        }
    }

    // Inverse iteration from a fixed, non-symmetric start vector.
    for (std::size_t i = 0; i < n; ++i) {
        mpfr_set_d(x[i], 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i + 1)), rnd);
    }
    double prev = -1.0;
    double lambda = 0.0;
    MpVec rq(3, bits);
    for (int iter = 0; iter < 200; ++iter) {
        // normalise x
        mpfr_set_ui(acc, 0, rnd);
        for (std::size_t i = 0; i < n; ++i) mpfr_fma(acc, x[i], x[i], acc, rnd);
        mpfr_sqrt(acc, acc, rnd);
        for (std::size_t i = 0; i < n; ++i) mpfr_div(x[i], x[i], acc, rnd);
        // y = G^{-1} x: forward then backward substitution
        for (std::size_t i = 0; i < n; ++i) {
            mpfr_set_ui(acc, 0, rnd);
            for (std::size_t m = 0; m < i; ++m) mpfr_fma(acc, L[i * n + m], y[m], acc, rnd);
            mpfr_sub(acc, x[i], acc, rnd);
            mpfr_div(y[i], acc, L[i * n + i], rnd);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            mpfr_set_ui(acc, 0, rnd);
            for (std::size_t m = ii + 1; m < n; ++m) mpfr_fma(acc, L[m * n + ii], y[m], acc, rnd);
            mpfr_sub(acc, y[ii], acc, rnd);
            mpfr_div(y[ii], acc, L[ii * n + ii], rnd);
        }
        // Rayleigh quotient of y: (y, x) / (y, y)
        mpfr_set_ui(rq[0], 0, rnd);
        mpfr_set_ui(rq[1], 0, rnd);
        for (std::size_t i = 0; i < n; ++i) {
            mpfr_fma(rq[0], y[i], x[i], rq[0], rnd);
            mpfr_fma(rq[1], y[i], y[i], rq[1], rnd);
        }
        mpfr_div(rq[2], rq[0], rq[1], rnd);
        for (std::size_t i = 0; i < n; ++i) mpfr_set(x[i], y[i], rnd);

        lambda = mpfr_get_d(rq[2], rnd);
        if (prev > 0.0 && std::abs(lambda - prev) <= 1e-15 * std::abs(lambda)) break;
        prev = lambda;
    }

    MinEig out;
    out.ok = mpfr_sgn(rq[2]) > 0;
    out.lambda = lambda;
    // eps = sqrt(1 - lambda), 1 - eps = lambda / (1 + eps)
    mpfr_ui_sub(a, 1, rq[2], rnd);
    mpfr_sqrt(a, a, rnd);
    out.eps = mpfr_get_d(a, rnd);
    mpfr_add_ui(b, a, 1, rnd);
    mpfr_div(b, rq[2], b, rnd);
    out.one_minus_eps = mpfr_get_d(b, rnd);
    return out;
}

}  // namespace

BasisAngle estimate_basis_angle(int N) {
    if (N < 1) {
        throw InvalidArgument("estimate_basis_angle needs N >= 1, got " + std::to_string(N));
    }
    // The smallest eigenvalue of I - O O^T falls roughly like 10^{-1.5 N}; carry
    // enough digits for the cancellation plus a margin, and retry if short.
    int digits = static_cast<int>(1.6 * N) + 40;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const auto bits = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623));
        const MinEig r = min_eig_tail(N, bits);
        if (r.ok) {
            BasisAngle out;
            out.eps = r.eps;
            out.eta = std::sqrt(r.lambda);
            out.one_minus_eps = r.one_minus_eps;
            out.precision_digits = digits;
            return out;
        }
        digits = digits * 3 / 2;
    }
    throw NonConvergence("basis angle: Cholesky failed at every precision tried", 0.0);
}

}  // namespace dnscatter
