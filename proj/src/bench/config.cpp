#include "adukf/bench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adukf/errors.hpp"

namespace adukf::bench {

namespace {

using nlohmann::json;

// Walks one JSON object, remembers the keys it consumed and rejects the rest.
class Block {
public:
    Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            fail(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    ~Block() = default;

    [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

    [[nodiscard]] std::string key_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& at(const std::string& key) {
        seen_.insert(key);
        return node_.at(key);
    }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_number()) fail(key_path(key), "expected a number");
        out = v.get<double>();
    }

    void integer(const std::string& key, int& out) {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_number_integer()) fail(key_path(key), "expected an integer");
        out = v.get<int>();
    }

    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_boolean()) fail(key_path(key), "expected true or false");
        out = v.get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_string()) fail(key_path(key), "expected a string");
        out = v.get<std::string>();
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        if (!has(key)) return;
        const json& v = at(key);
        if (v.is_null()) {
            out.reset();
        } else if (v.is_number()) {
            out = v.get<double>();
        } else {
            fail(key_path(key), "expected a number or null");
        }
    }

    void vector(const std::string& key, Vector& out, Index size) {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_array() || static_cast<Index>(v.size()) != size) {
            fail(key_path(key), "expected an array of " + std::to_string(size) + " numbers");
        }
        out.resize(size);
        for (Index i = 0; i < size; ++i) {
            if (!v[static_cast<std::size_t>(i)].is_number()) {
                fail(key_path(key), "expected an array of numbers");
            }
            out(i) = v[static_cast<std::size_t>(i)].get<double>();
        }
    }

    Block child(const std::string& key) { return Block(at(key), key_path(key)); }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key())) fail(key_path(it.key()), "unknown key");
        }
    }

    [[noreturn]] static void fail(const std::string& key, const std::string& what) {
        throw ConfigError("config key '" + key + "': " + what);
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_params(Block b, ad::ModelParams& p) {
    b.number("inv_volume_perL", p.inv_volume);
    b.number("k_ch", p.k_ch);
    b.number("k_pr", p.k_pr);
    b.number("k_li", p.k_li);
    b.number("k_dec", p.k_dec);
    b.vector("inlet", p.inlet, ad::kStates);
    b.finish();
}

void read_scenario(Block b, scenario::ScenarioConfig& s) {
    b.number("horizon_d", s.horizon);
    if (b.has("dt_h")) {
        double dt_h = 0.0;
        b.number("dt_h", dt_h);
        s.dt = dt_h / 24.0;
    }
    if (b.has("feeds")) {
        const json& arr = b.at("feeds");
        if (!arr.is_array()) Block::fail(b.key_path("feeds"), "expected an array");
        s.feeds.clear();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Block f(arr[i], b.key_path("feeds") + "[" + std::to_string(i) + "]");
            scenario::FeedPulse pulse;
            f.number("flow_Lpd", pulse.flow);
            f.number("start_d", pulse.start);
            f.number("duration_d", pulse.duration);
            f.finish();
            s.feeds.push_back(pulse);
        }
    }
    b.vector("sigma", s.sigma, ad::kOutputs);
    if (b.has("seed")) {
        const json& v = b.at("seed");
        if (!v.is_number_unsigned()) Block::fail(b.key_path("seed"), "expected a nonnegative integer");
        s.seed = v.get<std::uint64_t>();
    }
    if (b.has("true_params")) read_params(b.child("true_params"), s.true_params);
    if (b.has("filter_params")) read_params(b.child("filter_params"), s.filter_params);
    if (b.has("integrator")) {
        Block i = b.child("integrator");
        i.number("rel_tol", s.integrator.rel_tol);
        i.number("abs_tol", s.integrator.abs_tol);
        i.optional_number("fixed_step_d", s.integrator.fixed_step);
        i.finish();
    }
    b.finish();
}

void read_filter(Block b, FilterBlock& f) {
    b.string("variant", f.variant);
    b.number("alpha", f.tuning.alpha);
    b.number("beta", f.tuning.beta);
    b.number("kappa", f.tuning.kappa);
    b.optional_number("gamma_override", f.tuning.gamma_override);
    b.boolean("redraw_before_measurement", f.redraw_before_measurement);
    if (b.has("solver")) {
        Block s = b.child("solver");
        s.number("qp_tol", f.qp.tol);
        s.integer("qp_max_iterations", f.qp.max_iterations);
        s.number("nlp_tol", f.nlp.tol);
        s.integer("nlp_max_iterations", f.nlp.max_iterations);
        s.number("fd_step", f.nlp.fd_step);
        s.finish();
    }
    b.finish();
}

void read_benchmark(Block b, BenchmarkBlock& bm) {
    if (b.has("seeds")) {
        const json& arr = b.at("seeds");
        if (!arr.is_array() || arr.empty()) Block::fail(b.key_path("seeds"), "expected a non-empty array");
        bm.seeds.clear();
        for (const json& v : arr) {
            if (!v.is_number_unsigned()) Block::fail(b.key_path("seeds"), "expected nonnegative integers");
            bm.seeds.push_back(v.get<std::uint64_t>());
        }
    }
    if (b.has("variants")) {
        const json& arr = b.at("variants");
        if (!arr.is_array()) Block::fail(b.key_path("variants"), "expected an array of names");
        bm.variants.clear();
        for (const json& v : arr) {
            if (!v.is_string()) Block::fail(b.key_path("variants"), "expected an array of names");
            bm.variants.push_back(v.get<std::string>());
        }
    }
    if (b.has("gammas")) {
        const json& arr = b.at("gammas");
        if (!arr.is_array() || arr.empty()) Block::fail(b.key_path("gammas"), "expected a non-empty array");
        bm.gammas.clear();
        for (const json& v : arr) {
            if (v.is_number()) {
                bm.gammas.emplace_back(v.get<double>());
            } else if (v.is_string() && v.get<std::string>() == "nominal") {
                bm.gammas.emplace_back(std::nullopt);
            } else {
                Block::fail(b.key_path("gammas"), "expected numbers or \"nominal\"");
            }
        }
    }
    b.finish();
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    Block b(root, "");
    if (b.has("scenario")) read_scenario(b.child("scenario"), cfg.scenario);
    if (b.has("filter")) read_filter(b.child("filter"), cfg.filter);
    if (b.has("output")) {
        Block o = b.child("output");
        std::string dir = cfg.output.dir.string();
        o.string("dir", dir);
        cfg.output.dir = dir;
        o.boolean("write_estimates", cfg.output.write_estimates);
        o.finish();
    }
    if (b.has("benchmark")) read_benchmark(b.child("benchmark"), cfg.benchmark);
    b.finish();

    try {
        cfg.scenario.validate();
        cfg.filter.tuning.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace adukf::bench
