#pragma once

#include <stdexcept>
#include <string>

namespace lipclass {

/// Malformed or inconsistent data (bad records, dimension mismatches,
/// hash mismatches). Maps to CLI exit code 3.
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter outside its admissible domain. Maps to CLI exit code 2.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace lipclass
