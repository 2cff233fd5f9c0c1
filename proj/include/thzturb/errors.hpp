#ifndef THZTURB_ERRORS_HPP
#define THZTURB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thzturb {

// Thrown when an iterative/numerical procedure fails to reach its tolerance.
// Carries human-readable diagnostics (achieved error, offending parameter, ...).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a model hits a documented singular point (e.g. sigma_Psi^2 = 1).
class singular_point_error : public numerical_error {
public:
    explicit singular_point_error(const std::string& what) : numerical_error(what) {}
};

}  // namespace thzturb

#endif
