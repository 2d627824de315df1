#ifndef PACESYNC_CONFIG_HPP
#define PACESYNC_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "pacesync/harness.hpp"

namespace pacesync {

/// Raised for any malformed config; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses an experiment config from JSON text. Unknown fields are
/// rejected. Explicit xi0 entries are wrapped into [-pi, pi).
ExperimentSpec load_experiment_json(const std::string& text);

/// Same, reading the file at `path`.
ExperimentSpec load_experiment_file(const std::string& path);

} // namespace pacesync

#endif
