#ifndef FDA_ERRORS_HPP
#define FDA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fda {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A value's tracked precision fell below the configured floor.
class precision_exhausted : public error {
public:
    explicit precision_exhausted(const std::string& what)
        : error("precision exhausted: " + what) {}
};

/// Exact division failed (element not in the target subring).
class not_divisible : public error {
public:
    explicit not_divisible(const std::string& what)
        : error("not divisible: " + what) {}
};

/// Invalid configuration or unsupported input.
class usage_error : public error {
public:
    explicit usage_error(const std::string& what) : error(what) {}
};

/// Two independent computations of the same quantity disagreed.
class internal_check_failed : public error {
public:
    explicit internal_check_failed(const std::string& what)
        : error("internal cross-check failed: " + what) {}
};

} // namespace fda

#endif
