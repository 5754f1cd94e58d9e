// zzlab: batch driver for the abelian-family experiments.
//
// Every subcommand writes one CSV (or one JSON document with --format json)
// to --out, plus <out>.meta.json describing the run. Without --out the table
// goes to stdout and no sidecar is written. Exit codes: 0 ok, 2 invalid
// input, 3 resource limit, 1 anything else.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/version.hpp>

#include "zzlab/zzlab.hpp"

using namespace zzlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::optional<std::uint32_t> q;
  std::string group;
  int d = -1;
  int dmax = -1;
  double beta = 0.25;
  bool beta_set = false;
  int bs_degree = 0;  // 0: schedule
  std::size_t sample = 0;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  unsigned workers = default_workers();
  std::string config;
  // averages
  std::string mode = "A";
  std::vector<std::string> rho, place;
  std::vector<std::int64_t> lambda;
};

class UsageError : public DomainError {
 public:
  using DomainError::DomainError;
};

std::vector<std::uint32_t> parse_uint_list(const std::string& s, const std::string& what) {
  std::vector<std::uint32_t> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      long long x = std::stoll(tok, &pos);
      if (pos != tok.size() || x < 0) throw std::invalid_argument(tok);
      v.push_back(static_cast<std::uint32_t>(x));
    } catch (const std::exception&) {
      throw UsageError("cannot parse " + what + " '" + s + "'");
    }
  }
  if (v.empty()) throw UsageError("empty " + what);
  return v;
}

std::uint64_t budget_from_env() {
  const char* b = std::getenv("ZZLAB_BUDGET");
  if (!b || !*b) return kDefaultBudget;
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(b, &pos);
    if (pos != std::string(b).size()) throw std::invalid_argument(b);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("ZZLAB_BUDGET is not an integer: ") + b);
  }
}

/// Flat JSON config; keys mirror the long flags. Values only fill options not given on the command line.
void apply_config(Config& c, const CLI::App& sub) {
  if (c.config.empty()) return;
  std::ifstream f(c.config);
  if (!f) throw UsageError("cannot read config file " + c.config);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("config file must be a flat JSON object");
  auto given = [&](const std::string& flag) {
    try {
      return sub.get_option("--" + flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string key = it.key();
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (given(flag)) continue;
      const Json& v = it.value();
      if (key == "q") c.q = v.get<std::uint32_t>();
      else if (key == "group") {
        if (v.is_array()) {
          std::string s;
          for (const auto& x : v) s += (s.empty() ? "" : ",") + std::to_string(x.get<std::uint32_t>());
          c.group = s;
        } else c.group = v.is_string() ? v.get<std::string>() : std::to_string(v.get<std::uint32_t>());
      } else if (key == "d") c.d = v.get<int>();
      else if (key == "dmax") c.dmax = v.get<int>();
      else if (key == "beta") c.beta = v.get<double>(), c.beta_set = true;
      else if (key == "bs_degree" || key == "bs-degree") c.bs_degree = v.get<int>();
      else if (key == "sample") c.sample = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else if (key == "mode") c.mode = v.get<std::string>();
      else if (key == "rho") c.rho = v.get<std::vector<std::string>>();
      else if (key == "place") c.place = v.get<std::vector<std::string>>();
      else if (key == "lambda") c.lambda = v.get<std::vector<std::int64_t>>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad value in config file: " + std::string(e.what()));
  }
}

FamilySpec make_spec(const Config& c) {
  if (!c.q) throw UsageError("--q is required");
  if (c.group.empty()) throw UsageError("--group is required");
  return FamilySpec(*c.q, parse_uint_list(c.group, "group"));
}

int need_d(const Config& c) {
  if (c.d < 0) throw UsageError("--d is required");
  return c.d;
}

void check_common(const Config& c) {
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  if (!(c.beta > 0 && c.beta <= 0.5)) throw UsageError("--beta must lie in (0, 0.5]");
  if (c.workers == 0) throw UsageError("--workers must be positive");
}

Json config_json(const Config& c, const std::string& cmd) {
  Json j;
  j["subcommand"] = cmd;
  if (c.q) j["q"] = *c.q;
  j["group"] = c.group;
  if (c.d >= 0) j["d"] = c.d;
  if (c.dmax >= 0) j["dmax"] = c.dmax;
  j["beta"] = c.beta;
  j["bs_degree"] = c.bs_degree;
  j["sample"] = c.sample;
  j["seed"] = c.seed;
  j["format"] = c.format;
  return j;
}

/// Emits the artifact and its sidecar. Worker count is deliberately not recorded.
void emit(const Config& c, const std::string& cmd, const CsvTable* table, const Json& doc, Json extra) {
  Json meta;
  meta["tool"] = "zzlab";
  meta["version"] = kVersion;
  meta["libraries"] = {{"boost", BOOST_LIB_VERSION},
                       {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                             "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                       {"cli11", CLI11_VERSION}};
  meta["config"] = config_json(c, cmd);
  meta["seed"] = c.seed;
  if (table) meta["columns"] = table->header();
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  const std::string body = c.format == "json" ? doc.dump(2) + "\n" : table->str();
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  write_text(c.out, body);
  write_json(c.out + ".meta.json", meta);
}

std::string bi(const BigInt& v) { return v.str(); }
std::string fd(double v) { return format_double(v); }
std::string fld(long double v) { return format_double(static_cast<double>(v)); }

std::string elem(const std::vector<std::uint32_t>& g) {
  std::string s;
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? " " : "") + std::to_string(g[i]);
  return s;
}

std::vector<FamilyMember> members_for(const FamilySpec& S, const Config& c, int d) {
  if (c.sample > 0) return sample_members(S, d, c.sample, c.seed);
  return enumerate_members(S, d, false, budget_from_env());
}

// ---------------------------------------------------------------------------

int cmd_enumerate(const Config& c) {
  FamilySpec S = make_spec(c);
  const int d = need_d(c);
  auto members = members_for(S, c, d);
  CsvTable t({"index", "conductor_degree", "geometric", "surjective", "member"});
  Json doc;
  doc["q"] = S.q();
  doc["group"] = S.group.factors();
  doc["d"] = d;
  doc["family_size"] = bi(family_size(S, d));
  doc["sampled"] = c.sample > 0;
  Json arr = Json::array();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    Json mj = member_to_json(S, m);
    t.add({std::to_string(i), std::to_string(m.conductor_degree()), is_geometric(S, m) ? "1" : "0", is_surjective(S, m) ? "1" : "0",
           mj.dump()});
    arr.push_back(std::move(mj));
  }
  doc["members"] = std::move(arr);
  emit(c, "enumerate", &t, doc, {{"family_size", bi(family_size(S, d))}, {"rows", members.size()}});
  return 0;
}

int cmd_count_series(const Config& c) {
  FamilySpec S = make_spec(c);
  const int D = c.dmax >= 0 ? c.dmax : need_d(c);
  auto a = family_count_series(S, D, {}, c.workers);
  auto H = euler_H(S);
  CsvTable t({"d", "exact_count", "predicted_main_term", "ratio"});
  Json rows = Json::array();
  for (int d = 0; d <= D; ++d) {
    const long double pred = main_term(S, d, H.value);
    const double ratio = static_cast<double>(a[d].convert_to<long double>() / pred);
    t.add({std::to_string(d), bi(a[d]), fld(pred), fd(ratio)});
    rows.push_back({{"d", d}, {"exact_count", bi(a[d])}, {"predicted_main_term", json_double(static_cast<double>(pred))},
                    {"ratio", json_double(ratio)}});
  }
  Json consts = {{"H", json_double(static_cast<double>(H.value))},
                 {"H_truncation", H.truncation},
                 {"H_tail_bound", json_double(static_cast<double>(H.tail_bound))},
                 {"c_k", json_double(static_cast<double>(c_k(S.q())))}};
  Json doc = {{"q", S.q()}, {"group", S.group.factors()}, {"constants", consts}, {"rows", rows}};
  emit(c, "count-series", &t, doc, {{"constants", consts}});
  return 0;
}

int cmd_lfun(const Config& c) {
  FamilySpec S = make_spec(c);
  const int d = need_d(c);
  auto members = members_for(S, c, d);
  auto rhos = nontrivial_characters(S.group);
  int top = 1;
  for (const auto& m : members) top = std::max(top, m.conductor_degree() - 2);
  PlaceTable T(S.field, top);
  std::vector<MemberLData> data(members.size());
  parallel_for(members.size(), c.workers, [&](std::size_t i) { data[i] = analyze_member(S, T, members[i], rhos); });

  CsvTable t({"member", "rho", "type", "conductor", "degree", "expected_degree", "degree_law", "rh_residual", "ef_residual", "genus",
              "rh_genus", "angles"});
  Json arr = Json::array();
  double max_rh = 0, max_ef = 0;
  std::size_t law_fail = 0, genus_fail = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& D = data[i];
    if (D.geometric && D.genus != D.rh_genus) ++genus_fail;
    Json mj = {{"index", i}, {"member", member_to_json(S, members[i])}, {"geometric", D.geometric}};
    if (D.geometric) mj["genus"] = D.genus, mj["rh_genus"] = D.rh_genus;
    Json tw = Json::array();
    for (const auto& x : D.twists) {
      std::string ang;
      for (double th : x.angles.theta) ang += (ang.empty() ? "" : " ") + fd(th);
      const bool geo = x.L.has_value();
      if (geo) {
        max_rh = std::max(max_rh, x.angles.rh_residual);
        max_ef = std::max(max_ef, x.ef_residual);
        if (!x.degree_law) ++law_fail;
      }
      t.add({std::to_string(i), elem(x.rho.exponents()), to_string(x.type), std::to_string(x.conductor), geo ? std::to_string(x.L->degree()) : "",
             std::to_string(x.conductor - 2), geo ? (x.degree_law ? "1" : "0") : "", geo ? fd(x.angles.rh_residual) : "",
             geo ? fd(x.ef_residual) : "", D.geometric ? std::to_string(D.genus) : "", D.geometric ? std::to_string(D.rh_genus) : "", ang});
      Json xj = {{"rho", x.rho.exponents()}, {"type", to_string(x.type)}, {"conductor", x.conductor}};
      if (geo) {
        xj["l_polynomial"] = lpoly_to_json(*x.L);
        xj["angles"] = angles_to_json(x.angles);
        xj["degree_law"] = x.degree_law;
        xj["ef_residual"] = json_double(x.ef_residual);
      }
      tw.push_back(std::move(xj));
    }
    mj["twists"] = std::move(tw);
    arr.push_back(std::move(mj));
  }
  Json summary = {{"members", members.size()},
                  {"max_rh_residual", json_double(max_rh)},
                  {"max_ef_residual", json_double(max_ef)},
                  {"degree_law_failures", law_fail},
                  {"genus_mismatches", genus_fail}};
  Json doc = {{"q", S.q()}, {"group", S.group.factors()}, {"d", d}, {"summary", summary}, {"members", arr}};
  emit(c, "lfun", &t, doc, {{"summary", summary}});
  return 0;
}

Json describe_json(const Describe& D) {
  Json q = Json::array();
  for (const auto& [p, v] : D.quantiles)
    q.push_back({{"p", p}, {"empirical", json_double(v)}, {"normal", json_double(standard_normal_quantile(p))}});
  return {{"n", D.n}, {"mean", json_double(D.mean)}, {"variance", json_double(D.variance)}, {"skewness", json_double(D.skewness)},
          {"kurtosis", json_double(D.kurtosis)}, {"quantiles", q}};
}

Json exclusions_json(const ExclusionCounts& e) {
  return {{"constant_type", e.constant_type}, {"trivial_twist", e.trivial_twist}, {"degenerate", e.degenerate}};
}

int cmd_stats_clt(const Config& c) {
  FamilySpec S = make_spec(c);
  const int d = need_d(c);
  const std::size_t n = c.sample == 0 ? 500 : c.sample;
  if (n < 100) throw UsageError("stats-clt needs --sample >= 100");
  const int l = c.bs_degree > 0 ? c.bs_degree : bs_degree_schedule(d);
  auto members = sample_members(S, d, n, c.seed);
  auto E = observe_ensemble(S, d, members, c.beta, l, c.workers);
  auto clt = clt_report(E);
  auto dens = mean_density_report(E);

  CsvTable t({"member", "rho", "m", "N", "N_minus", "N_plus", "T", "Delta"});
  for (const auto& mo : E.members)
    for (const auto& tw : mo.twists) {
      if (tw.type != TwistType::Geometric) {
        t.add({std::to_string(mo.index), elem(tw.rho.exponents()), "", "", "", "", "", ""});
        continue;
      }
      t.add({std::to_string(mo.index), elem(tw.rho.exponents()), std::to_string(tw.m), std::to_string(tw.N), fd(tw.minus.N_l), fd(tw.plus.N_l),
             fd(tw.plus.terms.T), fd(tw.plus.terms.Delta)});
    }

  Json per = Json::array();
  for (const auto& p : clt.per_rho) per.push_back({{"rho", p.rho.exponents()}, {"r_weight", p.r_weight}, {"z", describe_json(p.z)}});
  Json corr = Json::array();
  for (const auto& row : clt.correlation) {
    Json r = Json::array();
    for (double v : row) r.push_back(json_double(v));
    corr.push_back(r);
  }
  Json dj = Json::array();
  for (const auto& p : dens.per_rho)
    dj.push_back({{"rho", p.rho.exponents()}, {"ratio", describe_json(p.ratio)}, {"max_deviation", json_double(p.max_deviation)},
                  {"max_normalized", json_double(p.max_normalized)}});
  Json moments = Json::array();
  for (const auto& p : clt.per_rho) {
    for (int r : {1, 2, 4}) {
      auto M = ensemble_moments(E, {p.rho}, {r});
      moments.push_back({{"rho", p.rho.exponents()}, {"r", r}, {"T_moment", json_double(M.T_moment)},
                         {"Delta_moment", json_double(M.Delta_moment)}, {"reference", json_double(M.reference)}, {"used", M.used}});
    }
  }
  Json thresholds = {{"density_mean", {0.9, 1.1}}, {"variance", {0.6, 1.6}}, {"abs_skewness", 0.5}, {"kurtosis", {2.2, 3.8}},
                     {"abs_correlation", 0.25}, {"T2_factor", 2.0}, {"abs_T_mean", 1.0}, {"Delta2_max", 25.0},
                     {"two_way_residual", 1e-6}};
  double two_way = 0;
  for (const auto& mo : E.members)
    for (const auto& tw : mo.twists)
      if (tw.type == TwistType::Geometric) two_way = std::max({two_way, tw.minus.two_way_residual, tw.plus.two_way_residual});
  Json report = {{"q", S.q()},
                 {"group", S.group.factors()},
                 {"d", d},
                 {"beta", c.beta},
                 {"seed", c.seed},
                 {"sample", n},
                 {"schedule", {{"l", l}, {"rule", c.bs_degree > 0 ? "override" : "round(d/log(d+1)) clipped to [4,256]"}}},
                 {"clt", {{"per_rho", per}, {"correlation", corr}, {"pair_counts", clt.pair_counts}, {"total", describe_json(clt.total)},
                          {"total_surjective", describe_json(clt.total_surjective)}, {"used", clt.used},
                          {"non_surjective", clt.non_surjective}, {"excluded", exclusions_json(clt.excluded)}}},
                 {"density", {{"per_rho", dj}, {"ensemble_mean", json_double(dens.ensemble_mean)}, {"used", dens.used},
                              {"excluded", exclusions_json(dens.excluded)}}},
                 {"moments", moments},
                 {"max_two_way_residual", json_double(two_way)},
                 {"thresholds", thresholds}};
  if (c.format == "csv" && !c.out.empty()) write_json(c.out + ".report.json", report);
  emit(c, "stats-clt", &t, report, {{"thresholds", thresholds}, {"schedule", {{"l", l}}}});
  return 0;
}

int cmd_bs_check(const Config& c) {
  const std::uint32_t q = c.q.value_or(3);
  std::vector<int> Ks{8, 16, 32, 64, 128, 256};
  std::vector<double> betas{0.1, 0.25, 0.4};
  if (c.bs_degree > 0) Ks = {c.bs_degree};
  if (c.beta_set) betas = {c.beta};
  const std::size_t grid = c.sample > 0 ? c.sample : 10000;
  CsvTable t({"K", "beta", "side", "c0_error", "majorant_violation", "even_sum", "diagonal_defect", "max_coeff_times_n", "prime_defect",
              "log_checks", "pass"});
  Json rows = Json::array();
  bool all = true;
  for (int K : Ks)
    for (double b : betas) {
      auto r = bs_diagnostics(selberg_pair(b, K), grid, q);
      all = all && r.pass();
      for (const auto* s : {&r.minus, &r.plus}) {
        const char* side = s == &r.minus ? "minus" : "plus";
        t.add({std::to_string(K), fd(b), side, fd(r.c0_error), fd(s->majorant_violation), fd(s->even_sum), fd(s->diagonal_defect),
               fd(s->max_coeff_times_n), fd(s->prime_defect), r.log_checks ? "1" : "0", r.side_pass(*s) ? "1" : "0"});
        rows.push_back({{"K", K}, {"beta", b}, {"side", side}, {"c0_error", json_double(r.c0_error)},
                        {"majorant_violation", json_double(s->majorant_violation)}, {"even_sum", json_double(s->even_sum)},
                        {"diagonal_defect", json_double(s->diagonal_defect)}, {"max_coeff_times_n", json_double(s->max_coeff_times_n)},
                        {"prime_defect", json_double(s->prime_defect)}, {"log_checks", r.log_checks}, {"pass", r.side_pass(*s)}});
      }
    }
  Json thresholds = {{"violation", BSReport::kViolationTol}, {"even", BSReport::kEven}, {"sum", BSReport::kSum},
                     {"coeff", BSReport::kCoeff}, {"prime", BSReport::kPrime}, {"c0", 1e-15}};
  Json doc = {{"q", q}, {"grid", grid}, {"all_pass", all}, {"thresholds", thresholds}, {"rows", rows}};
  emit(c, "bs-check", &t, doc, {{"thresholds", thresholds}, {"grid", grid}, {"all_pass", all}});
  return all ? 0 : 1;
}

ABMode parse_mode(const std::string& m) {
  if (m == "A") return ABMode::A;
  if (m == "B-unramified" || m == "B_unram") return ABMode::BUnramified;
  if (m == "B-ramified" || m == "B_ram") return ABMode::BRamified;
  throw UsageError("--mode must be A, B-unramified or B-ramified");
}

int cmd_averages(const Config& c) {
  FamilySpec S = make_spec(c);
  const int d0 = need_d(c);
  const int d1 = c.dmax >= 0 ? c.dmax : d0;
  const ABMode mode = parse_mode(c.mode);
  if (c.rho.size() != c.place.size()) throw UsageError("give one --place per --rho");
  std::vector<DualChar> rhos;
  std::vector<Place> places;
  for (const auto& r : c.rho) rhos.emplace_back(S.group, parse_uint_list(r, "character"));
  for (const auto& p : c.place) {
    if (p == "inf") places.push_back(Place::infinity());
    else places.push_back(Place::checked_finite(S.field, MonicPoly(parse_uint_list(p, "place polynomial"))));
  }
  const std::uint64_t budget = budget_from_env();
  CsvTable t({"d", "mode", "exact_re", "exact_im", "exact", "family_size", "predicted", "ratio", "normalized", "route"});
  Json rows = Json::array();
  for (int d = d0; d <= d1; ++d) {
    auto r = ab_averages(S, d, rhos, places, c.lambda, mode, budget);
    const auto v = r.value();
    t.add({std::to_string(d), to_string(mode), fd(v.real()), fd(v.imag()), r.exact.to_string(), bi(r.family_size),
           fld(r.predicted), fd(r.ratio()), fd(r.normalized()), r.route});
    rows.push_back({{"d", d}, {"exact", cyclotomic_to_json(r.exact)}, {"value", complex_to_json(v)}, {"family_size", bi(r.family_size)},
                    {"predicted", json_double(static_cast<double>(r.predicted))}, {"ratio", json_double(r.ratio())},
                    {"normalized", json_double(r.normalized())}, {"route", r.route}});
  }
  Json doc = {{"q", S.q()}, {"group", S.group.factors()}, {"mode", to_string(mode)}, {"rows", rows}};
  emit(c, "averages", &t, doc, {});
  return 0;
}

int cmd_probe_lemma(const Config& c) {
  FamilySpec S = make_spec(c);
  const int D = c.dmax >= 0 ? c.dmax : need_d(c);
  auto rep = probe_lemma(S, D, c.workers);
  // table=local: value = S_n(eps), reference = value a vanishing local sum would need.
  // table=series: value = eps-twisted coefficient, reference = untwisted coefficient.
  CsvTable t({"table", "eps", "n", "value", "reference"});
  Json local = Json::array(), series = Json::array();
  std::size_t nonvanishing = 0;
  for (const auto& r : rep.local) {
    if (r.gsum != r.vanishing) ++nonvanishing;
    t.add({"local", elem(r.eps), std::to_string(r.degree), std::to_string(r.gsum), std::to_string(r.vanishing)});
    local.push_back({{"eps", r.eps}, {"degree", r.degree}, {"gsum", r.gsum}, {"vanishing", r.vanishing}});
  }
  for (const auto& r : rep.series) {
    t.add({"series", elem(r.eps), std::to_string(r.d), bi(r.twisted), bi(r.untwisted)});
    series.push_back({{"eps", r.eps}, {"d", r.d}, {"twisted", bi(r.twisted)}, {"untwisted", bi(r.untwisted)}});
  }
  Json summary = {{"local_rows", rep.local.size()}, {"non_vanishing_local_sums", nonvanishing}, {"series_rows", rep.series.size()}};
  Json doc = {{"q", S.q()}, {"group", S.group.factors()}, {"dmax", D}, {"summary", summary}, {"local", local}, {"series", series}};
  emit(c, "probe-lemma", &t, doc, {{"summary", summary}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zzlab: abelian extensions of F_q(x) ordered by conductor"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--q", cfg.q, "size of the constant field");
    s->add_option("--group", cfg.group, "invariant factors n1,n2,... with n_{i+1} | n_i");
    s->add_option("--d", cfg.d, "conductor degree");
    s->add_option("--dmax", cfg.dmax, "largest degree for series tables");
    s->add_option("--beta", cfg.beta, "interval length, in (0, 0.5]");
    s->add_option("--bs-degree", cfg.bs_degree, "Selberg polynomial degree (default: schedule)");
    s->add_option("--sample", cfg.sample, "sample this many members instead of enumerating");
    s->add_option("--seed", cfg.seed, "sampling seed");
    s->add_option("--out", cfg.out, "output path (stdout if omitted)");
    s->add_option("--format", cfg.format, "csv or json");
    s->add_option("--workers", cfg.workers, "worker threads");
    s->add_option("--config", cfg.config, "flat JSON config; flags override it");
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const std::vector<Sub> subs{
      {"enumerate", "list the members of conductor degree d", cmd_enumerate},
      {"count-series", "exact counts against the main term", cmd_count_series},
      {"lfun", "L-polynomials, zero angles, RH and explicit-formula residuals", cmd_lfun},
      {"stats-clt", "zero statistics over a sampled ensemble", cmd_stats_clt},
      {"bs-check", "Beurling-Selberg diagnostics grid", cmd_bs_check},
      {"averages", "character averages over the family", cmd_averages},
      {"probe-lemma", "local sums and eps-twisted coefficients for eps != 1", cmd_probe_lemma},
  };
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* a = app.add_subcommand(s.name, s.help);
    common(a);
    if (std::string(s.name) == "averages") {
      a->add_option("--mode", cfg.mode, "A, B-unramified or B-ramified");
      a->add_option("--rho", cfg.rho, "character exponents e1,e2,... (repeatable)");
      a->add_option("--place", cfg.place, "place: monic coefficients low to high, or inf (repeatable)");
      a->add_option("--lambda", cfg.lambda, "Frobenius exponent per place (mode A)");
    }
    apps[s.name] = a;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& s : subs) {
      CLI::App* a = apps[s.name];
      if (!a->parsed()) continue;
      cfg.beta_set = a->get_option("--beta")->count() > 0;
      apply_config(cfg, *a);
      check_common(cfg);
      return s.run(cfg);
    }
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "zzlab: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "zzlab: resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "zzlab: error: " << e.what() << "\n";
    return 1;
  }
}
