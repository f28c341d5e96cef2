#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adukf/bench/config.hpp"
#include "adukf/filter.hpp"

namespace adukf::bench {

struct Variant {
    std::string name;
    NoiseMode noise_mode = NoiseMode::additive;
    bool square_root = false;
    std::optional<Formulation> formulation;  ///< set for constrained variants

    [[nodiscard]] bool constrained() const { return formulation.has_value(); }
};

/// ukf-add, ukf-sr, ukf-aug, ukf-fully-aug, then cukf-{add,aug,fully-aug}-{nlp-fd,nlp-grad,nlp-grad-hess,qp}.
const std::vector<Variant>& registered_variants();

/// Bare constrained names (cukf-add, ...) resolve to the QP formulation.
std::optional<Variant> find_variant(std::string_view name);

/// As find_variant, but throws ConfigError listing the valid names.
Variant require_variant(std::string_view name);

std::string valid_variant_names();

/// Filter settings for a variant; gamma overrides the tuning when set.
FilterSpec make_filter_spec(const Variant& v, const FilterBlock& block,
                            std::optional<double> gamma = std::nullopt);

}  // namespace adukf::bench
