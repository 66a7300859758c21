#include "crtarmor/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace crtarmor {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) raise(Errc::InvalidArgument, "malformed JSON");
    if (!doc.is_object()) raise(Errc::InvalidArgument, "top-level JSON object expected");
    return doc;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::InvalidArgument, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void warn_unknown_keys(const json& doc, const std::set<std::string>& known,
                       std::vector<std::string>& warnings) {
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) warnings.push_back("ignoring unknown key \"" + key + "\"");
}

template <typename T>
T require(const json& doc, const char* key) {
    if (!doc.contains(key)) raise(Errc::InvalidArgument, std::string("missing key \"") + key + "\"");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        raise(Errc::InvalidArgument, std::string("key \"") + key + "\" has the wrong type");
    }
}

ModulusSystem system_from(const json& doc) {
    return validate_system(require<std::size_t>(doc, "N"), require<double>(doc, "delta"),
                           require<std::vector<std::uint64_t>>(doc, "M"),
                           require<std::size_t>(doc, "K"));
}

}  // namespace

ProblemFile parse_problem(const std::string& json_text) {
    const json doc = parse_text(json_text);

    ProblemFile out;
    warn_unknown_keys(doc, {"N", "delta", "M", "K", "residue_sets", "variances"}, out.warnings);
    out.system = system_from(doc);

    const auto sets = require<std::vector<std::vector<double>>>(doc, "residue_sets");
    if (sets.size() != out.system.L())
        raise(Errc::InvalidArgument, "residue_sets must hold one list per modulus");
    out.table.sets = sets;
    for (std::size_t l = 0; l < sets.size(); ++l) {
        if (sets[l].empty() || sets[l].size() > out.system.n_integers)
            raise(Errc::InvalidArgument, "residue_sets[" + std::to_string(l) + "] must hold 1..N values");
        for (const double r : sets[l])
            if (!(r >= 0.0) || r >= static_cast<double>(out.system.m[l]))
                raise(Errc::OutOfRange, "residue outside [0, m_l) in set " + std::to_string(l));
    }

    if (doc.contains("variances")) {
        NoiseModel noise{require<std::vector<double>>(doc, "variances")};
        if (noise.variances.size() != out.system.L())
            raise(Errc::InvalidArgument, "variances must hold one value per modulus");
        for (const double v : noise.variances)
            if (!(v > 0.0)) raise(Errc::InvalidArgument, "variances must be positive");
        out.noise = std::move(noise);
    }
    return out;
}

ProblemFile load_problem(const std::string& path) { return parse_problem(slurp(path)); }

ParsedSimConfig parse_sim_config(const std::string& json_text) {
    const json doc = parse_text(json_text);

    ParsedSimConfig out;
    warn_unknown_keys(doc,
                      {"N", "delta", "M", "K", "n_trials", "snr_db", "seed", "bad_set_count",
                       "noise_scale", "x_range", "estimator"},
                      out.warnings);

    out.config.system = system_from(doc);
    out.config.n_trials = require<std::size_t>(doc, "n_trials");
    out.config.snr_db = require<std::vector<double>>(doc, "snr_db");
    out.config.seed = require<std::uint64_t>(doc, "seed");
    if (out.config.snr_db.empty()) raise(Errc::InvalidArgument, "snr_db must be non-empty");
    if (out.config.n_trials == 0) raise(Errc::InvalidArgument, "n_trials must be positive");

    if (doc.contains("bad_set_count"))
        out.config.bad_set_count = require<std::size_t>(doc, "bad_set_count");
    const std::size_t lambda_max = (out.config.system.L() - out.config.system.K) / 2;
    if (out.config.bad_set_count > lambda_max)
        raise(Errc::InvalidArgument, "bad_set_count exceeds floor((L-K)/2)");

    if (doc.contains("noise_scale")) {
        out.config.noise_scale = require<std::vector<double>>(doc, "noise_scale");
        if (out.config.noise_scale.size() != out.config.system.L())
            raise(Errc::InvalidArgument, "noise_scale must hold one value per modulus");
        for (const double s : out.config.noise_scale)
            if (!(s > 0.0)) raise(Errc::InvalidArgument, "noise_scale entries must be positive");
    }

    if (doc.contains("x_range")) {
        const auto range = require<std::vector<std::int64_t>>(doc, "x_range");
        if (range.size() != 2 || range[1] < range[0] || range[0] < 0)
            raise(Errc::InvalidArgument, "x_range must be [lo, hi] with 0 <= lo <= hi");
        out.config.x_range = {range[0], range[1]};
    }

    if (doc.contains("estimator")) {
        const auto name = require<std::string>(doc, "estimator");
        if (name == "mle")
            out.config.estimator = Estimator::Mle;
        else if (name == "plain_mean")
            out.config.estimator = Estimator::PlainMean;
        else
            raise(Errc::InvalidArgument, "estimator must be \"mle\" or \"plain_mean\"");
    }
    return out;
}

ParsedSimConfig load_sim_config(const std::string& path) { return parse_sim_config(slurp(path)); }

}  // namespace crtarmor
