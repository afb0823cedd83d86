#include "harness/config.hpp"

namespace depsgd::harness {

namespace {

// Common header: every preset still needs kind/seed/T filled per family.
const char* kLrBase = R"(
[problem]
d = 99
sigma = 1
beta_gen = gaussian_norm
beta_norm = 2
lambda_min = 1
lambda_max = 1.5

[stepsize]
eta_const = 0.005
c_a = 3
c_b = 100
t1 = -1
)";

std::string lr_family(bool dependent, bool sweep_ca) {
    std::string text = "[run]\nkind = regress\nseed = 1\nT = 999999\nreplications = 5\n";
    text += kLrBase;
    text += dependent ? "[covariates]\nkind = sphere_ar\n[noise]\nkind = dependent_sign\n"
                      : "[covariates]\nkind = iid_gaussian\n[noise]\nkind = iid_gaussian\n";
    if (sweep_ca) {
        text += "[variant ca3]\nstepsize.c_a = 3\n";
        text += "[variant ca10]\nstepsize.c_a = 10\n";
        text += "[variant ca50]\nstepsize.c_a = 50\n";
    } else {
        text += "[variant cb5]\nstepsize.c_b = 5\n";
        text += "[variant cb100]\nstepsize.c_b = 100\n";
        text += "[variant cb1000]\nstepsize.c_b = 1000\n";
    }
    return text;
}

std::string lsr_family(bool high_snr) {
    std::string text = "[run]\nkind = sparse\nseed = 1\nT = 9999999\nreplications = 3\n";
    text += R"(
[problem]
d = 99
sigma = 1
sparsity = 4
support = random
)";
    // Signal profile: one dominant entry, one weak entry, overall norm at
    // the requested signal-to-noise ratio against E|xi| of roughly 1.
    text += high_snr ? "support_values = 400,280,107.70255,0.4\n"
                     : "support_values = 4,2.8,1.0770255,0.004\n";
    text += R"(lambda_min = 1
lambda_max = 1.5

[covariates]
kind = sphere_ar

[noise]
kind = dependent_sign

[stepsize]
c_a = 3
c_b = 100

[sparse]
mode = heuristic
warmup = 20000
keep_top = 6
rho = 10
min_gap = 1000
s_max = 8
compare_dense = true
)";
    return text;
}

std::string lbd_family() {
    std::string text = "[run]\nkind = bandit\nseed = 1\nT = 999999\nreplications = 20\n";
    text += R"(
[problem]
d = 99
sigma = 1
arms = axes5
lambda_min = 1
lambda_max = 1.5
optimal_arms = 1,3,4,5

[covariates]
kind = sphere_ar

[noise]
kind = dependent_sign

[stepsize]
c_a = 20
c_b = 50
t1 = 1000

[exploration]
pre_rate = 0.5
t1 = 1000

[variant const-half]
exploration.kind = constant
exploration.pi_bar = 0.5

[variant inv-sqrt]
exploration.kind = rational_sqrt
exploration.a = 5
exploration.b = 50

[variant inv-linear]
exploration.kind = rational
exploration.a = 5
exploration.b = 50
)";
    return text;
}

std::string lbd_abandon() {
    return R"([run]
kind = bandit
seed = 1
T = 100000
replications = 5

[problem]
d = 20
sigma = 0.1
arms = margin5
h = 0.2
lambda_min = 0.3
lambda_max = 4
optimal_arms = 1,3,4,5

[covariates]
kind = signed_levels
levels = 1,2

[noise]
kind = iid_gaussian

[stepsize]
c_a = 2
c_b = 30
t1 = 2000
eta_const = 0.004

[exploration]
kind = two_phase_zero
t1 = -1
pre_rate = 0.5
c_star = 20
)";
}

std::string infer_cover() {
    return R"([run]
kind = infer
seed = 1
T = 100000
replications = 500

[problem]
d = 2
sigma = 1
beta = 0.7,-0.4
lambda_min = 1
lambda_max = 1.5

[covariates]
kind = iid_gaussian

[noise]
kind = iid_gaussian

[stepsize]
c_a = 3
c_b = 100
t1 = 0

[exploration]
kind = constant
pi_bar = 1

[infer]
t_eval = 100000
level = 0.95
)";
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig-lr-ca",       "fig-lr-ca-dep", "fig-lr-cb",  "fig-lr-cb-dep",
            "fig-lsr-low-snr", "fig-lsr-high-snr", "fig-lbd", "fig-lbd-abandon",
            "infer-cover"};
}

std::string preset_text(const std::string& name) {
    if (name == "fig-lr-ca") return lr_family(false, true);
    if (name == "fig-lr-ca-dep") return lr_family(true, true);
    if (name == "fig-lr-cb") return lr_family(false, false);
    if (name == "fig-lr-cb-dep") return lr_family(true, false);
    if (name == "fig-lsr-low-snr") return lsr_family(false);
    if (name == "fig-lsr-high-snr") return lsr_family(true);
    if (name == "fig-lbd") return lbd_family();
    if (name == "fig-lbd-abandon") return lbd_abandon();
    if (name == "infer-cover") return infer_cover();
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace depsgd::harness
