#include "zeno_otto/params.hpp"

namespace zeno_otto {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("invalid params: " + msg);
}

}  // namespace

void EngineParams::validate() const {
    require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    require(std::isfinite(omega0) && omega0 > 0.0, "omega0 must be > 0");
    require(std::isfinite(omega_l) && omega_l >= 0.0, "omega_l must be >= 0");
    require(std::isfinite(gamma_comp) && gamma_comp >= 0.0, "gamma_comp must be >= 0");
    require(std::isfinite(gamma_exp) && gamma_exp >= 0.0, "gamma_exp must be >= 0");
    require(std::isfinite(gamma_h) && gamma_h >= 0.0, "gamma_h must be >= 0");
    require(std::isfinite(gamma_c) && gamma_c >= 0.0, "gamma_c must be >= 0");
    require(std::isfinite(t_h) && t_h > 0.0, "t_h must be > 0");
    require(std::isfinite(t_c) && t_c > 0.0, "t_c must be > 0");
    require(std::isfinite(tau_comp) && tau_comp > 0.0, "tau_comp must be > 0");
    require(std::isfinite(tau_hot) && tau_hot > 0.0, "tau_hot must be > 0");
    require(std::isfinite(tau_exp) && tau_exp > 0.0, "tau_exp must be > 0");
    require(std::isfinite(tau_cold) && tau_cold > 0.0, "tau_cold must be > 0");
    require(n_meas >= 1, "n_meas must be >= 1");
    require(n_traj >= 1, "n_traj must be >= 1");
    require(std::isfinite(nu) && nu >= 0.0, "nu must be >= 0");
    require(std::isfinite(beta_reset) && beta_reset > 0.0, "beta_reset must be > 0");
    require(std::isfinite(lubricant_plus_weight) && lubricant_plus_weight >= 0.0 &&
                lubricant_plus_weight <= 1.0,
            "lubricant_plus_weight must be in [0, 1]");
}

}  // namespace zeno_otto
