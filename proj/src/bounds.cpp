#include "bcrb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bcrb::bounds {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPiE = 2.0 * M_PI * M_E;
}  // namespace

double phi(double x) {
    if (x < 0.0) throw DomainError("phi: argument must be nonnegative");
    return x < 1.0 ? x : 1.0 + std::log(x);
}

double psi(double a, double b) {
    if (a < 0.0 || a > 1.0) throw DomainError("psi: first argument must lie in [0, 1]");
    if (b < 0.0) throw DomainError("psi: second argument must be nonnegative");
    const double s = a * a + b;
    if (b < 2.0 * a + 1.0) return std::sqrt(s) - a;
    const double disc = std::max(0.0, s * s - 4.0 * a * s);
    const double root = std::sqrt(disc);
    return 0.5 * (1.0 - a + 2.0 * s / (s + root) + std::log((s + root) / 2.0 - a));
}

DeltaStar delta_star(double K, double P, double J) {
    if (!(P > 0.0)) throw DomainError("delta_star: P must be positive");
    if (K < 0.0 || J < 0.0) throw DomainError("delta_star: K and J must be nonnegative");
    DeltaStar out;
    if (J * P < 1.0 + 2.0 * K * P) {
        out.branch = DeltaBranch::small;
        out.delta = std::sqrt(K * K + J / P) - K;
    } else {
        out.branch = DeltaBranch::large;
        const double s = K * K * P + J;
        const double disc = std::max(0.0, s * s - 4.0 * K * s);
        out.delta = 0.5 * ((s - 2.0 * K) + std::sqrt(disc));
    }
    return out;
}

double tilted_rhs(double delta, double K, double P, double J, int n) {
    if (delta < 0.0) throw DomainError("tilted_rhs: delta must be nonnegative");
    if (!(P > 0.0)) throw DomainError("tilted_rhs: P must be positive");
    const double denom = K + delta;
    double base;
    if (denom <= 0.0) {
        if (J == 0.0)
            base = 0.0;
        else
            return kInf;
    } else {
        base = -K * delta * P / (2.0 * denom) + J / (2.0 * denom);
    }
    const double tail = delta < 1.0 / P ? 0.5 * delta * P : 0.5 * (1.0 + std::log(delta * P));
    return n * (base + tail);
}

double theorem2_bound(double K, double P, double J, int n, Theorem2Form form) {
    if (!(P > 0.0)) throw DomainError("theorem2_bound: P must be positive");
    if (K < 0.0 || J < 0.0) throw DomainError("theorem2_bound: K and J must be nonnegative");
    const double kp = K * P, jp = J * P;
    if (kp > 1.0 + 1e-9)
        throw InvariantViolation("theorem2_bound: KP > 1 violates Brascamp-Lieb");
    const double a = std::min(kp, 1.0);
    if (form == Theorem2Form::phi_form) return n * phi(std::sqrt(a * a + jp) - a);
    return n * psi(a, jp);
}

Theorem1Rhs theorem1_rhs(const ReferenceMeasure& mu, const LogConcavePrior& prior,
                         const ParametricModel& m, const QuadratureSpec& q) {
    Theorem1Rhs out;
    out.reference_name = mu.name;
    out.lsi_constant = mu.lsi_constant;
    out.relative_entropy = measures::relative_entropy(prior.base, mu.density, q);
    out.relative_fisher = measures::relative_fisher_information(prior.base, mu.density, q);
    out.avg_total_fisher = models::average_fisher_information(m, prior, q).total;
    if (std::isinf(out.relative_fisher)) {
        out.degenerate = true;
        out.value = kInf;
        return out;
    }
    out.value = 0.5 * mu.lsi_constant * (out.relative_fisher + out.avg_total_fisher) -
                out.relative_entropy;
    return out;
}

LowerBound efroimovich_bound(const LogConcavePrior& prior, const ParametricModel& m,
                             const QuadratureSpec& q, bool multidim) {
    const int n = prior.dim();
    if (!multidim && n != 1)
        throw DomainError("efroimovich_bound: scalar form requires n = 1 (set multidim)");
    LowerBound out;
    if (std::isinf(prior.fisher_j)) {
        out.degenerate = true;
        out.value = 0.0;
        return out;
    }
    const double total_fisher = models::average_fisher_information(m, prior, q).total;
    out.value = n / (prior.fisher_j + total_fisher);
    return out;
}

LowerBound van_trees_bound(const LogConcavePrior& prior, const ParametricModel& m,
                           const QuadratureSpec& q) {
    return efroimovich_bound(prior, m, q, /*multidim=*/true);
}

LogConcave1d logconcave_1d_bound(const LogConcavePrior& prior, const ParametricModel& m,
                                 const QuadratureSpec& q) {
    if (prior.dim() != 1 || m.theta_dim != 1)
        throw DomainError("logconcave_1d_bound: n = 1 only");
    LogConcave1d out;
    out.constant = 4.0 * std::exp(-2.0);
    out.avg_fisher = models::average_fisher_information(m, prior, q).total;
    if (!(out.avg_fisher > 0.0)) {
        out.bound = kInf;
        out.mse_corollary = kInf;
        out.precondition_met = false;
        return out;
    }
    out.bound = out.constant / out.avg_fisher;
    out.mse_corollary = out.bound;
    out.precondition_met = prior.variance >= 1.0 / out.avg_fisher;
    return out;
}

double gaussian_sequence_sharp(double snr, int n) {
    if (snr < 0.0) throw DomainError("gaussian_sequence_sharp: snr must be nonnegative");
    return 0.5 * n * std::log1p(snr);
}

ReverseEpi reverse_epi_rhs(const measures::DensityOnRn& mu, int k, const QuadratureSpec& q) {
    if (k < 1) throw DomainError("reverse_epi_rhs: k must be positive");
    const int n = mu.dim;
    const double var = measures::variance(mu, q);
    if (std::abs(var - n) > 1e-4)
        throw DomainError("reverse_epi_rhs: density must be normalized to Var = n (got " +
                          std::to_string(var) + ")");
    ReverseEpi out;
    out.j_mu = measures::fisher_information_j(mu, q);
    out.h1 = measures::differential_entropy(mu, q);
    if (std::isinf(out.j_mu)) {
        out.degenerate = true;
        out.rhs = kInf;
        return out;
    }
    out.rhs = (k * std::exp(2.0) * out.j_mu / n) * std::exp(2.0 * out.h1 / n);
    return out;
}

ClassicalCrb classical_crb(const ParametricModel& m, const Vec& theta, const QuadratureSpec& q) {
    if (m.theta_dim != 1) throw DomainError("classical_crb: n = 1 only");
    ClassicalCrb out;
    const double info = models::model_fisher_information(m, theta, q);
    if (!(info > 0.0)) {
        out.infinite = true;
        out.value = kInf;
        return out;
    }
    out.value = 1.0 / info;
    return out;
}

namespace {

nlohmann::ordered_json enc(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double dec(const nlohmann::ordered_json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::ordered_json mc_json(const oracles::McEstimate& e) {
    nlohmann::ordered_json j;
    j["value"] = enc(e.value);
    j["std_error"] = enc(e.std_error);
    j["seed"] = e.seed;
    j["samples"] = e.samples;
    return j;
}

oracles::McEstimate mc_from_json(const nlohmann::ordered_json& j) {
    oracles::McEstimate e;
    e.value = dec(j.at("value"));
    e.std_error = dec(j.at("std_error"));
    e.seed = j.at("seed").get<std::uint64_t>();
    e.samples = j.at("samples").get<long>();
    return e;
}

}  // namespace

nlohmann::ordered_json BoundReport::to_json() const {
    nlohmann::ordered_json j;
    j["scenario"] = scenario;
    j["n"] = n;
    j["K"] = enc(K);
    j["P"] = enc(P);
    j["J"] = enc(J);
    j["jp"] = enc(jp);
    j["snr"] = snr ? enc(*snr) : nlohmann::ordered_json(nullptr);
    j["prior"]["variance"] = enc(prior_variance);
    j["prior"]["fisher_j"] = enc(prior_fisher_j);
    j["prior"]["entropy"] = enc(prior_entropy);

    auto& jo = j["oracles"];
    jo["available"] = oracles_available;
    jo["mutual_information"] = enc(mi);
    jo["conditional_entropy"] = enc(conditional_entropy);
    jo["posterior_mse"] = enc(posterior_mse);
    jo["mc_mutual_information"] = mc_mi ? mc_json(*mc_mi) : nlohmann::ordered_json(nullptr);
    jo["mc_posterior_mse"] = mc_mse ? mc_json(*mc_mse) : nlohmann::ordered_json(nullptr);

    auto& jb = j["bounds"];
    jb["classical_crb"]["value"] = enc(crb_at_barycenter.value);
    jb["classical_crb"]["infinite"] = crb_at_barycenter.infinite;
    jb["van_trees"]["value"] = enc(van_trees.value);
    jb["van_trees"]["degenerate"] = van_trees.degenerate;
    jb["efroimovich"]["value"] = enc(efroimovich.value);
    jb["efroimovich"]["degenerate"] = efroimovich.degenerate;
    jb["theorem2_phi"] = enc(theorem2_phi);
    jb["theorem2_psi"] = enc(theorem2_psi);
    jb["theorem1"] = nlohmann::ordered_json::array();
    for (const auto& t : theorem1) {
        nlohmann::ordered_json jt;
        jt["reference"] = t.reference_name;
        jt["lsi_constant"] = enc(t.lsi_constant);
        jt["value"] = enc(t.value);
        jt["relative_entropy"] = enc(t.relative_entropy);
        jt["relative_fisher"] = enc(t.relative_fisher);
        jt["avg_total_fisher"] = enc(t.avg_total_fisher);
        jt["degenerate"] = t.degenerate;
        jb["theorem1"].push_back(jt);
    }
    if (eq8) {
        auto& je = jb["eq8"];
        je["bound"] = enc(eq8->bound);
        je["precondition_met"] = eq8->precondition_met;
        je["mse_corollary"] = enc(eq8->mse_corollary);
        je["constant"] = enc(eq8->constant);
        je["avg_fisher"] = enc(eq8->avg_fisher);
    } else {
        jb["eq8"] = nullptr;
    }
    jb["gaussian_sequence_sharp"] =
        sharp_gaussian ? enc(*sharp_gaussian) : nlohmann::ordered_json(nullptr);
    if (reverse_epi) {
        auto& jr = jb["reverse_epi"];
        jr["k"] = reverse_epi_k;
        jr["rhs"] = enc(reverse_epi->rhs);
        jr["lhs"] = enc(reverse_epi_lhs);
        jr["j_mu"] = enc(reverse_epi->j_mu);
        jr["h1"] = enc(reverse_epi->h1);
        jr["degenerate"] = reverse_epi->degenerate;
    } else {
        jb["reverse_epi"] = nullptr;
    }

    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["bound"] = enc(c.bound);
        jc["oracle"] = enc(c.oracle);
        jc["slack"] = enc(c.slack);
        jc["asserted"] = c.asserted;
        jc["satisfied"] = c.satisfied;
        jc["degenerate"] = c.degenerate;
        jc["tol"] = enc(c.tol);
        jc["note"] = c.note;
        j["checks"].push_back(jc);
    }
    j["errors"] = errors;
    j["all_satisfied"] = all_satisfied;
    j["tolerance"] = tolerance;
    return j;
}

BoundReport BoundReport::from_json(const nlohmann::ordered_json& j) {
    BoundReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.n = j.at("n").get<int>();
    r.K = dec(j.at("K"));
    r.P = dec(j.at("P"));
    r.J = dec(j.at("J"));
    r.jp = dec(j.at("jp"));
    if (!j.at("snr").is_null()) r.snr = dec(j.at("snr"));
    r.prior_variance = dec(j.at("prior").at("variance"));
    r.prior_fisher_j = dec(j.at("prior").at("fisher_j"));
    r.prior_entropy = dec(j.at("prior").at("entropy"));

    const auto& jo = j.at("oracles");
    r.oracles_available = jo.at("available").get<bool>();
    r.mi = dec(jo.at("mutual_information"));
    r.conditional_entropy = dec(jo.at("conditional_entropy"));
    r.posterior_mse = dec(jo.at("posterior_mse"));
    if (!jo.at("mc_mutual_information").is_null())
        r.mc_mi = mc_from_json(jo.at("mc_mutual_information"));
    if (!jo.at("mc_posterior_mse").is_null()) r.mc_mse = mc_from_json(jo.at("mc_posterior_mse"));

    const auto& jb = j.at("bounds");
    r.crb_at_barycenter.value = dec(jb.at("classical_crb").at("value"));
    r.crb_at_barycenter.infinite = jb.at("classical_crb").at("infinite").get<bool>();
    r.van_trees.value = dec(jb.at("van_trees").at("value"));
    r.van_trees.degenerate = jb.at("van_trees").at("degenerate").get<bool>();
    r.efroimovich.value = dec(jb.at("efroimovich").at("value"));
    r.efroimovich.degenerate = jb.at("efroimovich").at("degenerate").get<bool>();
    r.theorem2_phi = dec(jb.at("theorem2_phi"));
    r.theorem2_psi = dec(jb.at("theorem2_psi"));
    for (const auto& jt : jb.at("theorem1")) {
        Theorem1Rhs t;
        t.reference_name = jt.at("reference").get<std::string>();
        t.lsi_constant = dec(jt.at("lsi_constant"));
        t.value = dec(jt.at("value"));
        t.relative_entropy = dec(jt.at("relative_entropy"));
        t.relative_fisher = dec(jt.at("relative_fisher"));
        t.avg_total_fisher = dec(jt.at("avg_total_fisher"));
        t.degenerate = jt.at("degenerate").get<bool>();
        r.theorem1.push_back(t);
    }
    if (!jb.at("eq8").is_null()) {
        LogConcave1d e;
        e.bound = dec(jb.at("eq8").at("bound"));
        e.precondition_met = jb.at("eq8").at("precondition_met").get<bool>();
        e.mse_corollary = dec(jb.at("eq8").at("mse_corollary"));
        e.constant = dec(jb.at("eq8").at("constant"));
        e.avg_fisher = dec(jb.at("eq8").at("avg_fisher"));
        r.eq8 = e;
    }
    if (!jb.at("gaussian_sequence_sharp").is_null())
        r.sharp_gaussian = dec(jb.at("gaussian_sequence_sharp"));
    if (!jb.at("reverse_epi").is_null()) {
        ReverseEpi e;
        r.reverse_epi_k = jb.at("reverse_epi").at("k").get<int>();
        e.rhs = dec(jb.at("reverse_epi").at("rhs"));
        r.reverse_epi_lhs = dec(jb.at("reverse_epi").at("lhs"));
        e.j_mu = dec(jb.at("reverse_epi").at("j_mu"));
        e.h1 = dec(jb.at("reverse_epi").at("h1"));
        e.degenerate = jb.at("reverse_epi").at("degenerate").get<bool>();
        r.reverse_epi = e;
    }
    for (const auto& jc : j.at("checks")) {
        BoundCheck c;
        c.name = jc.at("name").get<std::string>();
        c.bound = dec(jc.at("bound"));
        c.oracle = dec(jc.at("oracle"));
        c.slack = dec(jc.at("slack"));
        c.asserted = jc.at("asserted").get<bool>();
        c.satisfied = jc.at("satisfied").get<bool>();
        c.degenerate = jc.at("degenerate").get<bool>();
        c.note = jc.at("note").get<std::string>();
        r.checks.push_back(c);
    }
    r.errors = j.at("errors").get<std::vector<std::string>>();
    r.all_satisfied = j.at("all_satisfied").get<bool>();
    r.tolerance = dec(j.at("tolerance"));
    return r;
}

std::string BoundReport::csv_header() {
    return "scenario,n,K,P,J,jp,snr,prior_variance,prior_fisher_j,mi,conditional_entropy,"
           "posterior_mse,classical_crb,van_trees,van_trees_degenerate,efroimovich,"
           "efroimovich_degenerate,theorem2_phi,theorem2_psi,theorem1,eq8_bound,"
           "eq8_precondition_met,gaussian_sequence_sharp,reverse_epi_k,reverse_epi_lhs,"
           "reverse_epi_rhs,all_satisfied";
}

std::string BoundReport::csv_row() const {
    std::ostringstream os;
    os << scenario << ',' << n << ',' << fmt(K) << ',' << fmt(P) << ',' << fmt(J) << ','
       << fmt(jp) << ',' << (snr ? fmt(*snr) : "") << ',' << fmt(prior_variance) << ','
       << fmt(prior_fisher_j) << ',';
    if (oracles_available)
        os << fmt(mi) << ',' << fmt(conditional_entropy) << ',' << fmt(posterior_mse);
    else
        os << ",,";
    os << ',' << fmt(crb_at_barycenter.value) << ',' << fmt(van_trees.value) << ','
       << (van_trees.degenerate ? 1 : 0) << ',' << fmt(efroimovich.value) << ','
       << (efroimovich.degenerate ? 1 : 0) << ',' << fmt(theorem2_phi) << ','
       << fmt(theorem2_psi) << ',';
    for (std::size_t i = 0; i < theorem1.size(); ++i) {
        if (i) os << ';';
        os << theorem1[i].reference_name << '=' << fmt(theorem1[i].value);
    }
    os << ',';
    os << (eq8 ? fmt(eq8->bound) : "") << ',' << (eq8 && eq8->precondition_met ? 1 : 0) << ','
       << (sharp_gaussian ? fmt(*sharp_gaussian) : "") << ',' << reverse_epi_k << ','
       << (reverse_epi ? fmt(reverse_epi_lhs) : "") << ','
       << (reverse_epi ? fmt(reverse_epi->rhs) : "") << ',' << (all_satisfied ? 1 : 0);
    return os.str();
}

namespace {

BoundCheck upper_check(std::string name, double bound, double oracle, double tol,
                       bool asserted = true) {
    BoundCheck c;
    c.name = std::move(name);
    c.bound = bound;
    c.oracle = oracle;
    c.slack = bound - oracle;
    c.asserted = asserted;
    c.satisfied = c.slack >= -tol;
    c.tol = tol;
    return c;
}

BoundCheck lower_check(std::string name, double bound, double oracle, double tol,
                       bool asserted = true) {
    BoundCheck c;
    c.name = std::move(name);
    c.bound = bound;
    c.oracle = oracle;
    c.slack = oracle - bound;
    c.asserted = asserted;
    c.satisfied = c.slack >= -tol;
    c.tol = tol;
    return c;
}

}  // namespace

BoundReport assemble_report(const ScenarioInputs& in) {
    BoundReport r;
    r.scenario = in.label;
    r.n = in.prior.dim();
    r.K = in.prior.strong_convexity;
    r.prior_variance = in.prior.variance;
    r.prior_fisher_j = in.prior.fisher_j;
    r.P = in.prior.variance / r.n;

    auto record_error = [&](const std::string& where, const std::exception& e) {
        r.errors.push_back(where + ": " + e.what());
    };

    try {
        const auto af = models::average_fisher_information(in.model, in.prior, in.quad);
        r.J = af.per_dim;
        r.jp = r.J * r.P;
    } catch (const Error& e) {
        record_error("average_fisher_information", e);
    }
    if (in.noise_variance) r.snr = in.prior.variance / (r.n * *in.noise_variance);

    if (in.run_oracles) {
        try {
            const auto o = oracles::compute_oracles(in.prior, in.model, in.quad);
            r.oracles_available = true;
            r.mi = o.mutual_information;
            r.conditional_entropy = o.conditional_entropy;
            r.posterior_mse = o.posterior_mse;
            r.prior_entropy = o.prior_entropy;
        } catch (const Error& e) {
            record_error("oracles", e);
        }
    } else {
        try {
            r.prior_entropy = measures::differential_entropy(in.prior.base, in.quad);
        } catch (const Error& e) {
            record_error("prior_entropy", e);
        }
    }
    if (in.run_mc) {
        try {
            r.mc_mi = oracles::mutual_information_mc(in.prior, in.model, in.mc_samples, in.seed);
            r.mc_mse = oracles::posterior_mean_mse_mc(in.prior, in.model, in.mc_samples, in.seed);
        } catch (const Error& e) {
            record_error("monte_carlo", e);
        }
    }

    if (r.n == 1) {
        try {
            r.crb_at_barycenter = classical_crb(in.model, in.prior.barycenter, in.quad);
        } catch (const Error& e) {
            record_error("classical_crb", e);
        }
    }
    try {
        r.van_trees = van_trees_bound(in.prior, in.model, in.quad);
        r.efroimovich = efroimovich_bound(in.prior, in.model, in.quad, r.n > 1);
    } catch (const Error& e) {
        record_error("van_trees/efroimovich", e);
    }
    try {
        r.theorem2_phi = theorem2_bound(r.K, r.P, r.J, r.n, Theorem2Form::phi_form);
        r.theorem2_psi = theorem2_bound(r.K, r.P, r.J, r.n, Theorem2Form::psi_form);
    } catch (const Error& e) {
        record_error("theorem2", e);
    }
    for (const auto& ref : in.references) {
        try {
            r.theorem1.push_back(theorem1_rhs(ref, in.prior, in.model, in.quad));
        } catch (const Error& e) {
            record_error("theorem1[" + ref.name + "]", e);
        }
    }
    if (r.n == 1) {
        try {
            r.eq8 = logconcave_1d_bound(in.prior, in.model, in.quad);
        } catch (const Error& e) {
            record_error("eq8", e);
        }
    }
    if (r.snr) {
        try {
            r.sharp_gaussian = gaussian_sequence_sharp(*r.snr, r.n);
        } catch (const Error& e) {
            record_error("gaussian_sequence_sharp", e);
        }
    }
    if (in.reverse_epi_k > 0 && r.n == 1) {
        try {
            r.reverse_epi_k = in.reverse_epi_k;
            r.reverse_epi = reverse_epi_rhs(in.prior.base, in.reverse_epi_k, in.quad);
            const double hk = oracles::iid_sum_entropy(in.prior.base, in.reverse_epi_k);
            r.reverse_epi_lhs = std::exp(2.0 * hk / r.n);
        } catch (const Error& e) {
            r.reverse_epi.reset();
            record_error("reverse_epi", e);
        }
    }

    const double tol = r.tolerance;
    // Formula-level relation, oracle-free.
    r.checks.push_back(upper_check("theorem2-phi-dominates-psi", r.theorem2_phi, r.theorem2_psi,
                                   1e-12));

    if (r.oracles_available) {
        r.checks.push_back(upper_check("theorem2-psi-dominates-mi", r.theorem2_psi, r.mi, tol));
        r.checks.push_back(upper_check("theorem2-phi-dominates-mi", r.theorem2_phi, r.mi, tol));
        for (const auto& t : r.theorem1) {
            BoundCheck c = upper_check("theorem1-" + t.reference_name + "-dominates-mi", t.value,
                                       r.mi, tol);
            if (t.degenerate) {
                c.degenerate = true;
                c.note = "degenerate: I_mu(pi) = +inf";
            }
            r.checks.push_back(c);
        }

        const double entropy_power = std::exp(2.0 * r.conditional_entropy / r.n) / kTwoPiE;
        {
            BoundCheck c = lower_check("efroimovich-vs-entropy-power", r.efroimovich.value,
                                       entropy_power, tol);
            if (r.efroimovich.degenerate) {
                c.asserted = false;
                c.satisfied = true;
                c.degenerate = true;
                c.note = "degenerate: J(pi) = +inf";
            }
            r.checks.push_back(c);
        }
        {
            BoundCheck c = lower_check("van-trees-vs-mse-per-dim", r.van_trees.value,
                                       r.posterior_mse / r.n, tol);
            if (r.van_trees.degenerate) {
                c.asserted = false;
                c.satisfied = true;
                c.degenerate = true;
                c.note = "degenerate: J(pi) = +inf";
            }
            r.checks.push_back(c);
        }
        // Maximum-entropy chain: MSE/n dominates the conditional entropy power.
        r.checks.push_back(
            lower_check("max-entropy-chain", entropy_power, r.posterior_mse / r.n, tol));

        if (r.eq8) {
            BoundCheck c = lower_check("eq8-entropy-power", r.eq8->bound,
                                       std::exp(2.0 * r.conditional_entropy), tol);
            if (!r.eq8->precondition_met) {
                c.asserted = false;
                c.note = "precondition Var(pi) >= 1/E I not met; informational";
            }
            r.checks.push_back(c);
        }
        if (r.sharp_gaussian && (in.model.label == "gaussian-location" ||
                                 in.model.label == "gaussian-sequence")) {
            r.checks.push_back(
                upper_check("gaussian-sequence-sharp-dominates-mi", *r.sharp_gaussian, r.mi, tol));
        }
        if (r.mc_mi) {
            BoundCheck c;
            c.name = "mc-mi-within-3se";
            c.bound = r.mc_mi->value;
            c.oracle = r.mi;
            c.slack = 3.0 * r.mc_mi->std_error - std::abs(r.mi - r.mc_mi->value);
            c.asserted = true;
            c.satisfied = c.slack >= 0.0;
            c.tol = 0.0;
            r.checks.push_back(c);
        }
        if (r.mc_mse) {
            BoundCheck c;
            c.name = "mc-mse-within-3se";
            c.bound = r.mc_mse->value;
            c.oracle = r.posterior_mse;
            c.slack = 3.0 * r.mc_mse->std_error - std::abs(r.posterior_mse - r.mc_mse->value);
            c.asserted = true;
            c.satisfied = c.slack >= 0.0;
            c.tol = 0.0;
            r.checks.push_back(c);
        }
    }
    if (r.reverse_epi) {
        BoundCheck c = upper_check("reverse-epi", r.reverse_epi->rhs, r.reverse_epi_lhs, 1e-3);
        if (r.reverse_epi->degenerate) {
            c.asserted = false;
            c.satisfied = true;
            c.degenerate = true;
            c.note = "degenerate: J(mu) = +inf";
        }
        r.checks.push_back(c);
    }

    r.all_satisfied = true;
    for (const auto& c : r.checks)
        if (c.asserted && !c.satisfied) r.all_satisfied = false;
    return r;
}

}  // namespace bcrb::bounds
