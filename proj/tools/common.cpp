#include "common.hpp"

#include <cstdio>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "webeco/ingest/public_suffix.hpp"

namespace webeco::cli {

namespace {

using json = nlohmann::json;

std::vector<CLI::ConfigItem> items_from(const json& j, const std::string& name, std::vector<std::string> parents) {
    std::vector<CLI::ConfigItem> out;
    if (j.is_object()) {
        if (!name.empty()) parents.push_back(name);
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto sub = items_from(it.value(), it.key(), parents);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    CLI::ConfigItem item;
    item.name = name;
    item.parents = std::move(parents);
    auto scalar = [&](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config value for '" + name + "' must be a scalar or a list of scalars");
    };
    if (j.is_array()) {
        for (const auto& v : j) item.inputs.push_back(scalar(v));
    } else {
        item.inputs.push_back(scalar(j));
    }
    out.push_back(std::move(item));
    return out;
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
        if (opt->get_single_name().empty() || opt->get_configurable() == false) continue;
        if (opt->count() > 0) {
            j[opt->get_single_name()] = opt->as<std::string>();
        } else if (default_also && !opt->get_default_str().empty()) {
            j[opt->get_single_name()] = opt->get_default_str();
        }
    }
    return j.dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
    json j;
    try {
        j = json::parse(input);
    } catch (const json::exception& e) {
        throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    return items_from(j, "", {});
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

OutputSet::~OutputSet() {
    if (committed_) return;
    streams_.clear();
    std::error_code ec;
    for (const auto& p : paths_) {
        std::filesystem::remove(p.string() + ".partial", ec);
    }
}

std::ofstream& OutputSet::open(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto stream = std::make_unique<std::ofstream>(path.string() + ".partial", std::ios::binary | std::ios::trunc);
    if (!*stream) throw DataError("cannot write " + path.string());
    paths_.push_back(path);
    streams_.push_back(std::move(stream));
    return *streams_.back();
}

void OutputSet::flush() {
    for (auto& s : streams_) {
        s->flush();
        if (!*s) throw DataError("write failed");
    }
}

void OutputSet::commit() {
    for (auto& s : streams_) {
        s->flush();
        if (!*s) throw DataError("write failed");
        s->close();
    }
    for (const auto& p : paths_) std::filesystem::rename(p.string() + ".partial", p);
    committed_ = true;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input " + path.string());
    return in;
}

nlohmann::ordered_json Manifest::to_json(const std::vector<std::filesystem::path>& outputs) const {
    nlohmann::ordered_json m;
    m["tool"] = "webeco";
    m["version"] = WEBECO_VERSION;
    m["command"] = command;
    m["libraries"] = {
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", BOOST_LIB_VERSION},
        {"openssl", OPENSSL_VERSION_TEXT},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"cli11", CLI11_VERSION},
        {"public_suffix_list", std::string(ingest::PublicSuffixList::bundled_version())}};
    m["seed"] = seed;
    m["settings"] = settings;
    nlohmann::ordered_json in = nlohmann::ordered_json::array();
    for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& p : outputs) {
        out.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p.string() + ".partial")}});
    }
    m["inputs"] = in;
    m["outputs"] = out;
    return m;
}

}  // namespace webeco::cli
