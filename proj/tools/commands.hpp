#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "common.hpp"

namespace webeco::cli {

struct Globals {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string manifest;
    bool seed_given = false;
    bool jobs_given = false;
};

/// Bad flag values discovered after parsing: exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Command {
    CLI::App* app = nullptr;
    std::set<std::string> output_options;  // recorded by file name in the manifest
    /// Writes the outputs and returns the one-line summary.
    std::function<std::string(OutputSet&, Manifest&)> run;
};

std::vector<Command> make_commands(CLI::App& app, const Globals& globals);

}  // namespace webeco::cli
