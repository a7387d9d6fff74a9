#pragma once

#include <stdexcept>
#include <string>

namespace regbis {

struct invalid_input_error : std::runtime_error {
    explicit invalid_input_error(const std::string& what) : std::runtime_error(what) {}
};

struct unsupported_operation_error : std::runtime_error {
    explicit unsupported_operation_error(const std::string& what) : std::runtime_error(what) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
    parse_error(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

}  // namespace regbis
