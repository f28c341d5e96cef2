#include "adukf/bench/variants.hpp"

#include "adukf/ad_model.hpp"
#include "adukf/errors.hpp"

namespace adukf::bench {

namespace {

std::string_view mode_suffix(NoiseMode m) {
    switch (m) {
        case NoiseMode::additive: return "add";
        case NoiseMode::augmented: return "aug";
        case NoiseMode::fully_augmented: return "fully-aug";
    }
    return "";
}

std::vector<Variant> build_registry() {
    std::vector<Variant> out;
    out.push_back({"ukf-add", NoiseMode::additive, false, std::nullopt});
    out.push_back({"ukf-sr", NoiseMode::additive, true, std::nullopt});
    out.push_back({"ukf-aug", NoiseMode::augmented, false, std::nullopt});
    out.push_back({"ukf-fully-aug", NoiseMode::fully_augmented, false, std::nullopt});
    for (NoiseMode m : {NoiseMode::additive, NoiseMode::augmented, NoiseMode::fully_augmented}) {
        for (Formulation f : {Formulation::nlp_fd, Formulation::nlp_grad,
                              Formulation::nlp_grad_hess, Formulation::qp}) {
            std::string name = "cukf-" + std::string(mode_suffix(m)) + "-" + std::string(to_string(f));
            out.push_back({std::move(name), m, false, f});
        }
    }
    return out;
}

}  // namespace

const std::vector<Variant>& registered_variants() {
    static const std::vector<Variant> registry = build_registry();
    return registry;
}

std::optional<Variant> find_variant(std::string_view name) {
    for (const Variant& v : registered_variants()) {
        if (v.name == name) return v;
    }
    for (NoiseMode m : {NoiseMode::additive, NoiseMode::augmented, NoiseMode::fully_augmented}) {
        if (name == "cukf-" + std::string(mode_suffix(m))) {
            return find_variant(std::string(name) + "-qp");
        }
    }
    return std::nullopt;
}

std::string valid_variant_names() {
    std::string out;
    for (const Variant& v : registered_variants()) {
        if (!out.empty()) out += ", ";
        out += v.name;
    }
    return out + " (cukf-add, cukf-aug and cukf-fully-aug alias the -qp forms)";
}

Variant require_variant(std::string_view name) {
    if (auto v = find_variant(name)) return *v;
    throw ConfigError("unknown variant '" + std::string(name) + "'; valid names: " +
                      valid_variant_names());
}

FilterSpec make_filter_spec(const Variant& v, const FilterBlock& block,
                            std::optional<double> gamma) {
    FilterSpec spec;
    spec.ukf.noise_mode = v.noise_mode;
    spec.ukf.square_root = v.square_root;
    spec.ukf.tuning = block.tuning;
    if (gamma) spec.ukf.tuning.gamma_override = gamma;
    spec.ukf.redraw_before_measurement = block.redraw_before_measurement;
    if (v.formulation) {
        spec.constrained = ConstrainedSetup{*v.formulation,
                                            opt::LinearConstraints::nonnegative(ad::kStates),
                                            block.qp, block.nlp};
    }
    return spec;
}

}  // namespace adukf::bench
