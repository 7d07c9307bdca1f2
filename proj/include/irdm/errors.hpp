#pragma once

#include <stdexcept>
#include <string>

namespace irdm {

// Error taxonomy used across the toolkit. The CLI maps these onto exit
// codes: ConfigError (and SchemaError) -> 2, DataError (rows, gaps) -> 3.

// Bad configuration or unusable file structure.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A file whose header/columns do not match the documented schema.
struct SchemaError : ConfigError {
    explicit SchemaError(const std::string& msg) : ConfigError(msg) {}
};

// Structurally valid input whose content violates a data contract.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A specific data row failed to parse or violated an invariant.
struct RowError : DataError {
    RowError(const std::string& file, std::size_t line, const std::string& msg)
        : DataError(file + ":" + std::to_string(line) + ": " + msg),
          file(file),
          line(line) {}
    std::string file;
    std::size_t line;
};

// A required day is missing from a weather series.
struct GapError : DataError {
    explicit GapError(const std::string& msg) : DataError(msg) {}
};

}  // namespace irdm
