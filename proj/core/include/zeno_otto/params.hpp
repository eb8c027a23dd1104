#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace zeno_otto {

// Invalid configuration or parameters. Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Every scalar of the engine model, in natural units (hbar = k_B = 1).
struct EngineParams {
    double omega = 1.0;        // working-medium bare gap
    double omega0 = 3.01105;   // drive amplitude; final gap Omega = sqrt(omega^2 + omega0^2)
    double omega_l = 1.0;      // lubricant gap
    double gamma_comp = 20.0;  // system-lubricant coupling, compression stroke
    double gamma_exp = 20.0;   // system-lubricant coupling, expansion stroke
    double gamma_h = 0.5;      // hot-bath dissipative rate
    double gamma_c = 0.5;      // cold-bath dissipative rate
    double t_h = 3.0;          // hot-bath temperature
    double t_c = 0.5;          // cold-bath temperature
    double tau_comp = 5.0;
    double tau_hot = 5.0;
    double tau_exp = 2.5;
    double tau_cold = 12.0;
    int n_meas = 100;          // lubricant measurements per work stroke
    int n_traj = 50;           // trajectory ensemble size
    double nu = 0.0;           // drive-cost constant
    double beta_reset = 1.0;   // inverse temperature of the measurement resetting bath
    double lubricant_plus_weight = 1.0;  // X-basis population of |+> in the prepared lubricant
    std::uint64_t master_seed = 20260808ull;

    double big_omega() const { return std::hypot(omega, omega0); }
    double cycle_time() const { return tau_comp + tau_hot + tau_exp + tau_cold; }
    // Eq.-level work-extraction condition: omega/Omega > T_c/T_h.
    bool work_extraction_regime() const { return omega / big_omega() > t_c / t_h; }

    void validate() const;
};

}  // namespace zeno_otto
