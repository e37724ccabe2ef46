#ifndef LNELAB_COMMON_HPP
#define LNELAB_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lnelab {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy: `input` covers malformed documents and contract violations
// (CLI exit 2), `numeric` covers runtime failures like empty samples or
// non-convergence (CLI exit 1).
enum class ErrorKind { input, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(ErrorKind::input, what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

inline double norm2(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double norm_inf(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec axpy(double alpha, const Vec& x, const Vec& y) {
    Vec r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = alpha * x[i] + y[i];
    return r;
}

inline Vec scaled(double alpha, const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i];
    return r;
}

inline Vec midpoint(const Vec& a, const Vec& b) {
    Vec m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
}

inline void check_dim(const Vec& x, std::size_t dim, const char* where) {
    if (x.size() != dim)
        throw Error(ErrorKind::input, std::string(where) + ": point has dimension " +
                                          std::to_string(x.size()) + ", expected " +
                                          std::to_string(dim));
}

// Lexicographic compare on coordinates; used wherever an order independent of
// construction history is needed (thinning, tie-breaks).
inline bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Shortest-repr then fixed fallback; stable across runs of the same binary,
// which is what the byte-identical-report guarantee rests on.
inline std::string format_double(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return std::string(shorter);
    }
    return std::string(buf);
}

namespace detail {

inline unsigned worker_count(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace detail

// Order-independent parallel map over [0, n). Each index is processed exactly
// once; `fn` must not touch shared mutable state except through its own slot.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    unsigned workers = detail::worker_count(threads);
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mu;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lnelab

#endif  // LNELAB_COMMON_HPP
