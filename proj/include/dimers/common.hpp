#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimers {

using cplx = std::complex<double>;
using RVec = std::vector<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kTwoPiI{0.0, 2.0 * kPi};

// Numeric status codes shared with the C API and the CLI exit codes.
enum class ErrorCode : int {
    invalid_argument = 1,
    validation = 2,
    numeric = 3,
    io = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

// One violated constraint; indices are 1-based where they refer to generators or pairs.
struct Violation {
    std::string what;
    std::vector<int> indices;
};
using ValidationReport = std::vector<Violation>;

// log(1 + w) with the principal branch, accurate for small |w|.
inline cplx log1p_c(cplx w) {
    const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
    const double im = std::atan2(w.imag(), 1.0 + w.real());
    return {re, im};
}

// log((z - a) / (z - b)), principal branch, written to stay accurate when |z| is large.
inline cplx log_ratio(cplx z, cplx a, cplx b) { return log1p_c((b - a) / (z - b)); }

}  // namespace dimers
