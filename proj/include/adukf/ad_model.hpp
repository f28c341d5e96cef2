#pragma once

// Six-state core anaerobic digestion model: first-order fermentation of
// carbohydrates, proteins and lipids to dissolved CH4/CO2 and biomass, with
// biomass decay recycled into the macronutrient pools.
//
// Units: time in days, concentrations in kg/m^3, feed flow in L/d, and the
// inverse liquid volume in 1/L.

#include <optional>

#include "adukf/types.hpp"
#include "adukf/ukf.hpp"

namespace adukf::ad {

inline constexpr Index kStates = 6;
inline constexpr Index kOutputs = 3;
inline constexpr Index kProcesses = 4;

/// State order.
enum StateIndex : Index { S_ch4 = 0, S_co2, X_ch, X_pr, X_li, X_bac };

using Stoichiometry = Eigen::Matrix<double, kProcesses, kStates>;

struct ModelParams {
    double inv_volume = 0.01;  ///< 1 / V_liq, 1/L
    double k_ch = 0.25;        ///< carbohydrate fermentation, 1/d
    double k_pr = 0.20;        ///< protein fermentation, 1/d
    double k_li = 0.10;        ///< lipid fermentation, 1/d
    double k_dec = 0.02;       ///< biomass decay, 1/d
    /// Signed yields, rows = processes (ch, pr, li fermentation, decay), columns = states.
    Stoichiometry petersen = default_petersen();
    Vector inlet = default_inlet();  ///< inlet concentrations xi, kg/m^3

    static Stoichiometry default_petersen();
    static Vector default_inlet();

    /// Parameters that generate the synthetic plant data.
    static ModelParams plant();
    /// Parameters of the filter model: rates biased by about +28 %.
    static ModelParams filter();

    void validate() const;
};

/// dx/dt at (x, u). Defined for any real x; negative entries are not clamped.
Vector rhs(const Vector& x, double u, const ModelParams& p);

/// y = (S_ch4, S_co2, X_bac).
Vector output(const Vector& x);
Matrix output_matrix();

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    /// When set, integrate with this constant step instead of adapting.
    std::optional<double> fixed_step;
};

/// Integrates dx/dt = rhs(x, u) over [0, dt] with u held constant.
/// Throws IntegrationFailure if the adaptive step collapses or the result is not finite.
Vector propagate(const Vector& x, double u, double dt, const ModelParams& p,
                 const IntegratorConfig& cfg = {});

/// SystemModel wrapping propagate() and the linear output map.
SystemModel make_system_model(const ModelParams& p, const IntegratorConfig& cfg = {});

}  // namespace adukf::ad
