#ifndef PLENOPTIC_ERROR_HPP
#define PLENOPTIC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace plenoptic {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (index out of range, bad size, ...).
class invalid_argument : public error {
public:
    using error::error;
};

/// A configuration field is missing or inconsistent. `field()` names the offending key.
class config_error : public error {
public:
    config_error(std::string field, const std::string& what)
        : error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The focus solver found no real image distance for the requested setting.
class unfocusable_error : public error {
public:
    using error::error;
};

/// The optics collapse to a degenerate case (zero power, parallel chief rays, ...).
class degenerate_optics_error : public error {
public:
    using error::error;
};

} // namespace plenoptic

#endif // PLENOPTIC_ERROR_HPP
