// Command line driver: batch experiments over measures, perturbation
// families, model spaces and the dissipative bridge, with deterministic CSV
// and JSON artifacts.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankone/acceptance.hpp"
#include "rankone/cauchy.hpp"
#include "rankone/clark.hpp"
#include "rankone/errors.hpp"
#include "rankone/halfplane.hpp"
#include "rankone/measure.hpp"
#include "rankone/model.hpp"
#include "rankone/operator_matrix.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"
#include "rankone/report.hpp"
#include "rankone/representation.hpp"
#include "rankone/sio.hpp"

namespace {

using rankone::cplx;
using json = nlohmann::ordered_json;

struct Options {
  std::string measure_text;
  std::vector<cplx> alphas;
  cplx gamma{0.3, 0.0};
  std::vector<double> eps_grid;
  int grid_n = 1 << 12;
  uint64_t seed = 1;
  std::string kernel = "hilbert";
  std::string kernel_json;
  std::string family = "cauchy";
  std::string measure2_text;
  double p_exponent = 2.0;
  int trials = 3;
  double c_target = 0.0;
  std::string routes = "all";
  double tol_route = 1e-7;
  double tol_unitary = 1e-10;
  double tol_exactish = 1e-12;
  std::string out_csv;
  std::string out_json;
};

cplx parse_cplx(const std::string& text) {
  const size_t comma = text.find(',');
  try {
    if (comma == std::string::npos) return cplx(std::stod(text), 0.0);
    return cplx(std::stod(text.substr(0, comma)),
                std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw rankone::ConfigError("cannot parse complex number from '" + text +
                               "' (expected re or re,im)");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rankone::ConfigError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

rankone::Measure resolve_measure(const std::string& text) {
  if (text.empty()) throw rankone::ConfigError("no measure given");
  std::string s = text;
  const size_t first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && s[first] == '{') {
    return rankone::Measure::from_json(s);
  }
  if (std::filesystem::exists(s)) {
    return rankone::Measure::from_json(read_file(s));
  }
  return rankone::preset_measure(s);
}

std::string fmt(double v) { return rankone::format_double(v); }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const rankone::RunReport& rep, const json& data,
          const Options& opt) {
  std::cout << rep.summary();
  if (!opt.out_json.empty()) {
    json artifact = json::parse(rep.to_json());
    if (!data.is_null()) artifact["data"] = data;
    rankone::write_text_file(opt.out_json, artifact.dump(2) + "\n");
  }
}

int verdict(const rankone::RunReport& rep) {
  return rep.aggregate_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------

int run_spectrum_scan(const Options& opt) {
  if (opt.alphas.empty()) {
    throw rankone::ConfigError("spectrum-scan: empty alpha list");
  }
  const rankone::Measure mu = resolve_measure(opt.measure_text);
  const bool on_line = mu.support() == rankone::Support::line;

  rankone::RunReport rep;
  rep.subcommand = "spectrum-scan";
  rep.seed = opt.seed;
  rankone::CsvTable csv;
  csv.header = {"alpha_re", "alpha_im", "index", "position", "weight"};

  for (cplx alpha : opt.alphas) {
    rankone::Measure mu_a = [&] {
      if (on_line) {
        if (alpha.imag() != 0.0) {
          throw rankone::ConfigError(
              "spectrum-scan: line measures take real alpha");
        }
        return rankone::spectral_measure_perturbed(
            rankone::SelfAdjointFamily{mu, alpha.real()});
      }
      if (std::abs(std::abs(alpha) - 1.0) > 1e-12) {
        throw rankone::ConfigError(
            "spectrum-scan: circle measures take unimodular alpha");
      }
      return rankone::spectral_measure_perturbed(
          rankone::UnitaryFamily{mu, alpha});
    }();

    int idx = 0;
    for (const rankone::Atom& a : mu_a.atoms()) {
      csv.rows.push_back({fmt(alpha.real()), fmt(alpha.imag()),
                          std::to_string(idx++), fmt(a.position),
                          fmt(a.weight)});
    }

    const rankone::RepresentationOperator v =
        on_line ? rankone::build_V_alpha(mu, mu_a, alpha.real())
                : rankone::build_V_gamma_circle(mu, mu_a, alpha);
    const Eigen::MatrixXcd& m = v.matrix.mat;
    const int n = static_cast<int>(m.rows());
    const std::string tag = "(alpha=" + fmt(alpha.real()) +
                            (alpha.imag() != 0.0 ? "," + fmt(alpha.imag())
                                                 : std::string()) +
                            ")";
    rep.add("V_unitary" + tag,
            (m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).norm(),
            opt.tol_unitary);
    Eigen::MatrixXcd ms = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      ms(k, k) = on_line ? cplx(v.matrix.target.coords[k], 0.0)
                         : v.matrix.target.points[k];
    }
    const Eigen::MatrixXcd fam_mat =
        on_line ? rankone::build_A_alpha(
                      rankone::SelfAdjointFamily{mu, alpha.real()})
                      .mat
                : rankone::build_U_param(rankone::UnitaryFamily{mu, alpha}).mat;
    rep.add("V_intertwines" + tag, (m * fam_mat - ms * m).norm(),
            opt.tol_unitary);
    rep.add("V_maps_one_to_one" + tag,
            (m * rankone::constant_coords(v.matrix.source) -
             rankone::constant_coords(v.matrix.target))
                .norm(),
            opt.tol_exactish);
  }

  if (!opt.out_csv.empty()) {
    rankone::write_text_file(opt.out_csv, csv.to_string());
  }
  emit(rep, json(), opt);
  return verdict(rep);
}

// ---------------------------------------------------------------------------

int run_clark_verify(const Options& opt) {
  const rankone::Measure mu = resolve_measure(opt.measure_text);
  const bool want_all = opt.routes == "all";
  if (!want_all && opt.routes != "universal" && opt.routes != "snf" &&
      opt.routes != "dbr") {
    throw rankone::ConfigError(
        "clark-verify: --route must be universal|snf|dbr|all");
  }

  rankone::RunReport rep;
  rep.subcommand = "clark-verify";
  rep.seed = opt.seed;
  std::mt19937_64 rng(opt.seed);

  const rankone::ClarkContext ctx =
      rankone::make_clark_context(mu, opt.gamma, opt.grid_n);
  const rankone::Samples f = rankone::random_samples(rng, mu);

  auto sup_gap = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, std::abs(a[j] - b[j]));
    }
    return worst;
  };

  std::optional<rankone::RouteResult> uni, snf;
  std::optional<rankone::DbrResult> dbr;
  if (want_all || opt.routes == "universal") {
    uni = rankone::phi_star_universal(ctx, f);
    rep.add_exact("universal_settled", uni->unsettled.empty());
  }
  if (want_all || opt.routes == "snf") {
    snf = rankone::phi_star_snf(ctx, f);
    rep.add_exact("snf_settled", snf->unsettled.empty());
  }
  if (want_all || opt.routes == "dbr") {
    dbr = rankone::dbr_components(ctx, f);
    rep.add_exact("dbr_settled", dbr->unsettled.empty());
  }
  if (uni && snf) {
    rep.add("universal_vs_snf",
            std::max(sup_gap(uni->vec.g1, snf->vec.g1),
                     sup_gap(uni->vec.g2, snf->vec.g2)),
            opt.tol_route);
  }
  if (uni && dbr) {
    const rankone::ModelVectorDBR t =
        rankone::transcription_map(uni->vec, ctx.cf);
    rep.add("universal_vs_dbr",
            std::max(sup_gap(t.g_plus, dbr->vec.g_plus),
                     sup_gap(t.g_minus, dbr->vec.g_minus)),
            opt.tol_route);
  }
  if (snf && dbr) {
    const rankone::ModelVectorDBR t =
        rankone::transcription_map(snf->vec, ctx.cf);
    rep.add("snf_vs_dbr",
            std::max(sup_gap(t.g_plus, dbr->vec.g_plus),
                     sup_gap(t.g_minus, dbr->vec.g_minus)),
            opt.tol_route);
  }

  // optional rotated family members
  for (cplx alpha : opt.alphas) {
    const rankone::AlphaClarkContext actx =
        rankone::make_alpha_context(ctx, alpha);
    const rankone::Samples fa =
        rankone::random_samples(rng, actx.mu_alpha);
    const rankone::RouteResult direct =
        rankone::phi_star_alpha(ctx, actx, fa);
    const rankone::RouteResult composed =
        rankone::phi_star_alpha_composed(ctx, actx, fa);
    rep.add("alpha_direct_vs_composed(alpha=" + fmt(alpha.real()) + "," +
                fmt(alpha.imag()) + ")",
            std::max(sup_gap(direct.vec.g1, composed.vec.g1),
                     sup_gap(direct.vec.g2, composed.vec.g2)),
            opt.tol_route);
  }

  emit(rep, json(), opt);
  return verdict(rep);
}

// ---------------------------------------------------------------------------

rankone::KernelSpec resolve_kernel(const Options& opt) {
  if (opt.kernel != "custom-json") return rankone::named_kernel(opt.kernel);
  if (opt.kernel_json.empty()) {
    throw rankone::ConfigError(
        "--kernel custom-json needs --kernel-json <file>");
  }
  json spec;
  try {
    spec = json::parse(read_file(opt.kernel_json));
  } catch (const json::exception& e) {
    throw rankone::ConfigError(std::string("kernel json: ") + e.what());
  }
  if (spec.value("type", "") != "power") {
    throw rankone::ConfigError(
        "kernel json: only {\"type\":\"power\",\"exponent\":k,"
        "\"conjugate\":bool} is supported");
  }
  const int k = spec.value("exponent", 1);
  const bool conj = spec.value("conjugate", false);
  if (k < 1 || k > 4) {
    throw rankone::ConfigError("kernel json: exponent must be 1..4");
  }
  rankone::KernelSpec out;
  out.name = "custom_power_" + std::to_string(k) + (conj ? "_conj" : "");
  out.dimension = 2;
  out.evaluator = [k, conj](cplx x, cplx y) {
    cplx d = x - y;
    cplx powed = 1.0;
    for (int i = 0; i < k; ++i) powed *= d;
    if (conj) powed = std::conj(powed);
    return 1.0 / powed;
  };
  return out;
}

rankone::ScanFamily resolve_family(const std::string& name) {
  if (name == "trunc") return rankone::ScanFamily::trunc;
  if (name == "smooth") return rankone::ScanFamily::smooth;
  if (name == "cauchy") return rankone::ScanFamily::cauchy;
  if (name == "radial") return rankone::ScanFamily::radial;
  throw rankone::ConfigError(
      "--family must be trunc|smooth|cauchy|radial, got '" + name + "'");
}

int run_regularize(const Options& opt) {
  if (opt.eps_grid.empty()) {
    throw rankone::ConfigError("regularize: empty eps grid");
  }
  const rankone::Measure mu = resolve_measure(opt.measure_text);
  const rankone::Measure nu = opt.measure2_text.empty()
                                  ? mu
                                  : resolve_measure(opt.measure2_text);
  const rankone::KernelSpec kernel = resolve_kernel(opt);
  const rankone::NormScan scan = rankone::uniform_bound_scan(
      kernel, resolve_family(opt.family), mu, nu, opt.eps_grid, opt.c_target);

  rankone::RunReport rep;
  rep.subcommand = "regularize";
  rep.seed = opt.seed;
  if (opt.c_target > 0.0) {
    rep.add("uniform_norm_bound", scan.max_norm, opt.c_target);
  } else {
    rep.add_exact("scan_completed", true);
  }

  if (!opt.out_csv.empty()) {
    rankone::write_text_file(opt.out_csv, scan.to_csv());
  }
  json data;
  data["kernel"] = kernel.name;
  data["family"] = opt.family;
  data["max_norm"] = fmt(scan.max_norm);
  data["min_norm"] = fmt(scan.min_norm);
  emit(rep, data, opt);
  return verdict(rep);
}

// ---------------------------------------------------------------------------

int run_schur_test(const Options& opt) {
  const rankone::Measure mu = resolve_measure(opt.measure_text);
  const rankone::Measure nu = opt.measure2_text.empty()
                                  ? mu
                                  : resolve_measure(opt.measure2_text);
  const rankone::KernelSpec kernel = resolve_kernel(opt);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  rankone::SchurMultiplierSpec sigma;
  const int n_atoms = 1 + static_cast<int>(unit(rng) * 4.0);
  for (int k = 0; k < n_atoms; ++k) {
    sigma.atoms.push_back(rankone::ComplexAtom{
        pos(rng),
        std::polar(0.2 + 0.8 * unit(rng), 2.0 * rankone::pi * unit(rng))});
  }

  const rankone::SchurBoundReport r = rankone::schur_bound_check(
      kernel, sigma.evaluator(), mu, nu, opt.p_exponent, opt.trials, rng());

  rankone::RunReport rep;
  rep.subcommand = "schur-test";
  rep.seed = opt.seed;
  rep.add_exact("variation_bound_holds", r.ok);

  json data;
  data["kernel"] = kernel.name;
  data["km_estimate"] = fmt(r.km_estimate);
  data["k_upper"] = fmt(r.k_upper);
  data["variation"] = fmt(r.variation);
  data["slack"] = fmt(r.slack);
  emit(rep, data, opt);
  return verdict(rep);
}

// ---------------------------------------------------------------------------

int run_model_check(const Options& opt) {
  const rankone::Measure mu = resolve_measure(opt.measure_text);
  const rankone::CharacteristicFunction cf =
      rankone::char_function_boundary(mu, opt.gamma, opt.grid_n);

  rankone::RunReport rep;
  rep.subcommand = "model-check";
  rep.seed = opt.seed;

  const cplx theta0 = cf.at(0.0);
  rep.add("theta_at_zero_is_minus_gamma", std::abs(theta0 + opt.gamma),
          opt.tol_exactish);

  const double inner_score = cf.inner_score();
  if (mu.is_atomic()) {
    rep.add("inner_score_atomic", inner_score, 1e-5);
  }

  const rankone::DefectVectorsModel d = rankone::defect_vectors_model(cf);
  const rankone::ModelVectorDBR tc = rankone::transcription_map(d.c, cf);
  const double norm_eq = std::abs(rankone::dbr_norm(tc, cf) -
                                  rankone::model_norm(cf.grid, d.c));
  rep.add("transcription_norm_equality", norm_eq, 1e-8);

  const rankone::ModelVectorSNF via_proj =
      rankone::compressed_shift_projection(d.c, cf);
  const rankone::ModelVectorSNF via_formula =
      rankone::compressed_shift_rank_one(d.c, cf, d);
  double shift_gap = 0.0;
  for (int j = 0; j < cf.size(); ++j) {
    const size_t sj = static_cast<size_t>(j);
    shift_gap = std::max(shift_gap,
                         std::abs(via_proj.g1[sj] - via_formula.g1[sj]));
    shift_gap = std::max(shift_gap,
                         std::abs(via_proj.g2[sj] - via_formula.g2[sj]));
  }
  rep.add("compressed_shift_agreement", shift_gap, 1e-6);

  json data;
  data["theta_at_0"] = cplx_json(theta0);
  data["inner_score"] = fmt(inner_score);
  data["norm_equality_residual"] = fmt(norm_eq);
  data["compressed_shift_agreement"] = fmt(shift_gap);
  emit(rep, data, opt);
  return verdict(rep);
}

// ---------------------------------------------------------------------------

int run_dissipative(const Options& opt) {
  if (opt.alphas.size() != 1) {
    throw rankone::ConfigError("dissipative: exactly one --alpha re,im");
  }
  const cplx alpha = opt.alphas.front();
  const rankone::Measure mu = resolve_measure(opt.measure_text);
  const rankone::CayleyBridge bridge = rankone::make_cayley_bridge(mu, alpha);

  rankone::RunReport rep;
  rep.subcommand = "dissipative";
  rep.seed = opt.seed;
  json residuals;

  const double cayley = rankone::cayley_identity_residual(mu, alpha);
  rep.add("cayley_matrix_identity", cayley, 1e-10);
  residuals["cayley_identity"] = fmt(cayley);

  const double conj_res = rankone::omega_conjugation_residual(mu);
  rep.add("omega_conjugation", conj_res, 1e-10);
  residuals["omega_conjugation"] = fmt(conj_res);

  const rankone::Samples ones = rankone::ones_samples(mu);
  const rankone::Samples ones_t = rankone::ones_samples(bridge.mu_circle);
  const std::vector<cplx> ws = {cplx(0.0, 1.0), cplx(0.0, 2.0),
                                cplx(1.0, 1.0), cplx(-1.5, 0.7)};
  double transfer = 0.0, theta_gap = 0.0;
  for (cplx w : ws) {
    const cplx xi = rankone::omega_map(w);
    transfer = std::max(
        transfer, std::abs(rankone::halfplane_R(mu, ones, w) -
                           rankone::cauchy_circle_R(bridge.mu_circle, ones_t,
                                                    xi)));
    transfer = std::max(
        transfer, std::abs(rankone::halfplane_R2(mu, ones, w) -
                           rankone::cauchy_circle_R2(bridge.mu_circle, ones_t,
                                                     xi)));
    if (std::abs(bridge.gamma) < 1.0) {
      theta_gap = std::max(
          theta_gap,
          std::abs(rankone::theta_halfplane(mu, bridge.gamma, w) -
                   rankone::theta_from_measure(bridge.mu_circle, bridge.gamma,
                                               xi)));
    }
  }
  rep.add("transfer_identities", transfer, 1e-10);
  residuals["transfer"] = fmt(transfer);
  if (std::abs(bridge.gamma) < 1.0) {
    rep.add("theta_route_agreement", theta_gap, 1e-10);
    residuals["theta"] = fmt(theta_gap);
  }

  if (alpha.imag() > 0.0) {
    // Clark routes need the Poisson normalized representative
    const rankone::Measure mun = rankone::poisson_normalize(mu);
    const rankone::HalfplaneClarkContext ctx =
        rankone::make_halfplane_context(mun, alpha, opt.grid_n);
    std::mt19937_64 rng(opt.seed);
    const rankone::Samples f = rankone::random_samples(rng, mun);
    const double phi_gap = std::max(
        {rankone::route_residual(rankone::phi_star_halfplane_universal(ctx, f),
                                 rankone::phi_star_halfplane_snf(ctx, f)),
         rankone::route_residual(
             rankone::phi_star_halfplane_universal(ctx, f),
             rankone::phi_star_halfplane_via_circle(ctx, f))});
    rep.add("phi_star_routes", phi_gap, opt.tol_route);
    residuals["phi_star"] = fmt(phi_gap);
  }

  json data;
  data["gamma"] = cplx_json(bridge.gamma);
  data["Q"] = cplx_json(bridge.q);
  data["P"] = fmt(bridge.p);
  data["route_residuals"] = residuals;
  emit(rep, data, opt);
  return verdict(rep);
}

// ---------------------------------------------------------------------------

int run_acceptance_cmd(const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const rankone::RunReport rep = rankone::run_acceptance(opt.seed);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  emit(rep, json(), opt);
  std::cout << "total runtime: " << static_cast<long>(secs + 0.5) << " s\n";
  return verdict(rep);
}

// ---------------------------------------------------------------------------
// config file front end

double positive_tol(const json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  const double v = j[field].get<double>();
  if (!(v > 0.0)) {
    throw rankone::ConfigError(std::string("config: tolerance '") + field +
                               "' must be positive");
  }
  return v;
}

cplx cplx_from_json(const json& v, const char* field) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2) {
    return cplx(v[0].get<double>(), v[1].get<double>());
  }
  if (v.is_string()) return parse_cplx(v.get<std::string>());
  throw rankone::ConfigError(std::string("config: field '") + field +
                             "' must be a number, [re, im], or \"re,im\"");
}

int run_config(const std::string& path) {
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw rankone::ConfigError("config parse error in '" + path +
                               "': " + e.what());
  }
  if (cfg.value("schema", "") != "rankone-config-v1") {
    throw rankone::ConfigError(
        "config: missing or unsupported schema (want rankone-config-v1)");
  }
  const std::string sub = cfg.value("subcommand", "");
  Options opt;
  if (cfg.contains("measure")) {
    const json& m = cfg["measure"];
    if (m.is_string()) {
      opt.measure_text = m.get<std::string>();
    } else if (m.is_object() && m.contains("file")) {
      const std::string f = m["file"].get<std::string>();
      if (!std::filesystem::exists(f)) {
        throw rankone::ConfigError("config: measure file '" + f +
                                   "' does not exist");
      }
      opt.measure_text = f;
    } else {
      opt.measure_text = m.dump();
    }
  }
  if (cfg.contains("measure2")) {
    opt.measure2_text = cfg["measure2"].is_string()
                            ? cfg["measure2"].get<std::string>()
                            : cfg["measure2"].dump();
  }
  for (const json& a : cfg.value("alphas", json::array())) {
    opt.alphas.push_back(cplx_from_json(a, "alphas"));
  }
  if (cfg.contains("gamma")) opt.gamma = cplx_from_json(cfg["gamma"], "gamma");
  for (const json& e : cfg.value("eps_grid", json::array())) {
    opt.eps_grid.push_back(e.get<double>());
  }
  opt.grid_n = cfg.value("grid_n", opt.grid_n);
  opt.seed = cfg.value("seed", opt.seed);
  opt.kernel = cfg.value("kernel", opt.kernel);
  opt.kernel_json = cfg.value("kernel_json", opt.kernel_json);
  opt.family = cfg.value("family", opt.family);
  opt.p_exponent = cfg.value("p", opt.p_exponent);
  opt.trials = cfg.value("trials", opt.trials);
  opt.c_target = cfg.value("c_target", opt.c_target);
  opt.routes = cfg.value("routes", opt.routes);
  opt.out_csv = cfg.value("out_csv", opt.out_csv);
  opt.out_json = cfg.value("out_json", opt.out_json);
  if (cfg.contains("tolerances")) {
    const json& t = cfg["tolerances"];
    opt.tol_route = positive_tol(t, "route", opt.tol_route);
    opt.tol_unitary = positive_tol(t, "unitary", opt.tol_unitary);
    opt.tol_exactish = positive_tol(t, "exact", opt.tol_exactish);
  }

  if (sub == "spectrum-scan") return run_spectrum_scan(opt);
  if (sub == "clark-verify") return run_clark_verify(opt);
  if (sub == "regularize") return run_regularize(opt);
  if (sub == "schur-test") return run_schur_test(opt);
  if (sub == "model-check") return run_model_check(opt);
  if (sub == "dissipative") return run_dissipative(opt);
  if (sub == "acceptance") return run_acceptance_cmd(opt);
  throw rankone::ConfigError("config: unknown subcommand '" + sub + "'");
}

void add_measure_flags(CLI::App* cmd, Options& opt, bool second = false) {
  cmd->add_option("--measure", opt.measure_text,
                  "preset name, inline JSON, or path to a measure file");
  if (second) {
    cmd->add_option("--measure2", opt.measure2_text,
                    "target-side measure (defaults to --measure)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-one perturbation toolbox"};
  app.require_subcommand(1);

  Options opt;
  std::vector<std::string> alpha_texts;
  std::string gamma_text;
  std::string config_path;

  auto* scan = app.add_subcommand("spectrum-scan",
                                  "perturbed spectra and representation "
                                  "operator checks");
  add_measure_flags(scan, opt);
  scan->add_option("--alpha", alpha_texts, "perturbation parameter (re or re,im); repeatable");
  scan->add_option("--out-csv", opt.out_csv, "eigenvalue table");
  scan->add_option("--out-json", opt.out_json, "report artifact");

  auto* clark = app.add_subcommand("clark-verify",
                                   "cross-check the Clark operator routes");
  add_measure_flags(clark, opt);
  clark->add_option("--gamma", gamma_text, "family parameter (re or re,im)");
  clark->add_option("--alpha", alpha_texts,
                    "also check rotated members at these unimodular alphas");
  clark->add_option("--route", opt.routes, "universal|snf|dbr|all");
  clark->add_option("--grid-n", opt.grid_n, "boundary grid size");
  clark->add_option("--seed", opt.seed, "sample seed");
  clark->add_option("--tol", opt.tol_route, "route agreement tolerance");
  clark->add_option("--out-json", opt.out_json, "report artifact");

  auto* reg = app.add_subcommand("regularize",
                                 "uniform norm scan of regularized kernels");
  add_measure_flags(reg, opt, true);
  reg->add_option("--kernel", opt.kernel,
                  "hilbert|cauchy_line|cauchy_circle|riesz|beurling|custom-json");
  reg->add_option("--kernel-json", opt.kernel_json,
                  "custom kernel description file");
  reg->add_option("--family", opt.family, "trunc|smooth|cauchy|radial");
  reg->add_option("--eps-grid", opt.eps_grid, "regularization parameters");
  reg->add_option("--c-target", opt.c_target,
                  "verdict threshold for the max norm (0 disables)");
  reg->add_option("--seed", opt.seed, "seed");
  reg->add_option("--out-csv", opt.out_csv, "eps,norm table");
  reg->add_option("--out-json", opt.out_json, "report artifact");

  auto* schur = app.add_subcommand("schur-test",
                                   "variation bound for measure-driven "
                                   "Schur multipliers");
  add_measure_flags(schur, opt, true);
  schur->add_option("--kernel", opt.kernel, "kernel name");
  schur->add_option("--p", opt.p_exponent, "Lebesgue exponent");
  schur->add_option("--trials", opt.trials, "random support splits");
  schur->add_option("--seed", opt.seed, "seed");
  schur->add_option("--out-json", opt.out_json, "report artifact");

  auto* model = app.add_subcommand("model-check",
                                   "characteristic function and model space "
                                   "diagnostics");
  add_measure_flags(model, opt);
  model->add_option("--gamma", gamma_text, "family parameter");
  model->add_option("--grid-n", opt.grid_n, "boundary grid size");
  model->add_option("--out-json", opt.out_json, "report artifact");

  auto* diss = app.add_subcommand("dissipative",
                                  "half-plane bridge diagnostics");
  add_measure_flags(diss, opt);
  diss->add_option("--alpha", alpha_texts, "coupling (re,im)");
  diss->add_option("--grid-n", opt.grid_n, "boundary grid size");
  diss->add_option("--seed", opt.seed, "sample seed");
  diss->add_option("--out-json", opt.out_json, "report artifact");

  auto* acc = app.add_subcommand("acceptance", "run the full acceptance suite");
  acc->add_option("--seed", opt.seed, "suite seed");
  acc->add_option("--out-json", opt.out_json, "report artifact");

  auto* runc = app.add_subcommand("run", "run from a JSON config");
  runc->add_option("--config", config_path, "experiment config file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    for (const std::string& t : alpha_texts) {
      opt.alphas.push_back(parse_cplx(t));
    }
    if (!gamma_text.empty()) opt.gamma = parse_cplx(gamma_text);

    if (scan->parsed()) return run_spectrum_scan(opt);
    if (clark->parsed()) return run_clark_verify(opt);
    if (reg->parsed()) return run_regularize(opt);
    if (schur->parsed()) return run_schur_test(opt);
    if (model->parsed()) return run_model_check(opt);
    if (diss->parsed()) return run_dissipative(opt);
    if (acc->parsed()) return run_acceptance_cmd(opt);
    if (runc->parsed()) return run_config(config_path);
  } catch (const rankone::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rankone::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
