#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace webeco::cli {

/// Reads --config JSON: top-level scalars feed the main options, objects feed
/// the subcommand of the same name.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

/// Bad input data: exit status 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::filesystem::path& path);

/// Outputs are written to "<path>.partial" and renamed only on commit; anything
/// not committed is deleted when the set is destroyed.
class OutputSet {
public:
    ~OutputSet();
    std::ofstream& open(const std::filesystem::path& path);
    /// Flushes every pending stream so the ".partial" files can be hashed.
    void flush();
    void commit();
    const std::vector<std::filesystem::path>& paths() const { return paths_; }

private:
    std::vector<std::filesystem::path> paths_;
    std::vector<std::unique_ptr<std::ofstream>> streams_;
    bool committed_ = false;
};

std::ifstream open_input(const std::filesystem::path& path);

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    nlohmann::ordered_json settings = nlohmann::ordered_json::object();
    std::vector<std::filesystem::path> inputs;

    /// Library versions, settings, input digests and digests of the pending
    /// (".partial") outputs, listed by file name.
    nlohmann::ordered_json to_json(const std::vector<std::filesystem::path>& outputs) const;
};

}  // namespace webeco::cli
