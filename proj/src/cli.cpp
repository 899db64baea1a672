#include "cli.hpp"

#include "sectorium/sectorium.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <queue>
#include <random>
#include <sstream>

#ifndef SECTORIUM_FIXTURE_DIR
#define SECTORIUM_FIXTURE_DIR "fixtures"
#endif

namespace sectorium::cli {
namespace {

using io::json;
namespace fs = std::filesystem;

const std::vector<std::string> kSubcommands{"validate-group", "validate-irreps", "decompose", "toy-model", "cover", "rotor"};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return os.str();
}

std::string fixture_dir() {
  if (const char* env = std::getenv("SECTORIUM_FIXTURES"); env && *env) return env;
  return SECTORIUM_FIXTURE_DIR;
}

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void input(const std::string& name, const json& value) { inputs_[name] = value; }
  json& results() { return results_; }

  void check(const std::string& name, double residual, double threshold) {
    const bool pass = residual < threshold;
    all_pass_ = all_pass_ && pass;
    checks_.push_back(json{{"name", name}, {"residual", residual}, {"threshold", threshold}, {"verdict", pass ? "pass" : "fail"}});
  }
  void check_equal(const std::string& name, double actual, double expected) {
    check(name, std::abs(actual - expected), 0.5);
  }
  void check_true(const std::string& name, bool ok) { check(name, ok ? 0.0 : 1.0, 0.5); }

  bool all_pass() const { return all_pass_; }

  json to_json() const {
    return json{{"command", command_}, {"inputs_digest", sha256_hex(inputs_.dump())}, {"checks", checks_}, {"results", results_}};
  }

 private:
  std::string command_;
  json inputs_ = json::object();
  json checks_ = json::array();
  json results_ = json::object();
  bool all_pass_ = true;
};

std::string message_of(const Error& e) {
  const std::string what = e.what();
  const auto prefix = std::string(to_string(e.kind())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

/// Runs `parse` and prefixes any error message with the source file.
template <typename F>
auto from_source(const std::string& source, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + message_of(e));
  }
}

struct Loaded {
  FiniteGroup group;
  json group_json;
};

Loaded load_group(const std::string& arg) {
  json j;
  if (fs::is_regular_file(arg)) {
    j = io::read_file(arg);
  } else if (const auto path = fs::path(fixture_dir()) / (arg + ".group.json"); fs::is_regular_file(path)) {
    j = io::read_file(path.string());
  } else if (auto spec = fixtures::bundled_group(arg)) {
    j = io::to_json(*spec);
  } else {
    throw Error(ErrorKind::MalformedInput, "unknown group '" + arg + "' (not a file, fixture or bundled name)");
  }
  return {from_source(arg, [&] { return FiniteGroup::load(io::group_spec_from_json(j)); }), j};
}

std::pair<IrrepSet, json> load_irreps(const std::string& arg, const FiniteGroup& group, double tol) {
  json j;
  if (!arg.empty()) {
    if (!fs::is_regular_file(arg)) throw Error(ErrorKind::MalformedInput, arg + ": cannot open file");
    j = io::read_file(arg);
  } else if (const auto path = fs::path(fixture_dir()) / (group.name() + ".irreps.json"); fs::is_regular_file(path)) {
    j = io::read_file(path.string());
  } else if (auto raw = fixtures::bundled_irreps(group.name())) {
    j = io::to_json(group.name(), group, *raw);
  } else {
    throw Error(ErrorKind::MalformedInput, "no irreps given and none bundled for group '" + group.name() + "'");
  }
  const std::string source = arg.empty() ? group.name() + " irreps" : arg;
  return {from_source(source, [&] { return validate_irrep_set(group, io::irreps_from_json(j, group), tol); }), j};
}

json labels_of(const FiniteGroup& g, const std::vector<Element>& elems) {
  json out = json::array();
  for (Element x : elems) out.push_back(g.label(x));
  return out;
}

Vector random_unit(Eigen::Index d, std::mt19937_64& rng) {
  Vector v = random_matrix(d, 1, rng);
  return v / v.norm();
}

// --- validate-group ---------------------------------------------------------

void cmd_validate_group(Report& rep, const std::string& group_arg) {
  const auto [group, gj] = load_group(group_arg);
  rep.input("group", gj);
  const auto cs = conjugacy_structure(group);
  auto& r = rep.results();
  r["name"] = group.name();
  r["order"] = group.order();
  r["identity"] = group.label(group.identity());
  r["abelian"] = group.is_abelian();
  json classes = json::array();
  bool divides = true;
  for (const auto& c : cs.classes) {
    classes.push_back(labels_of(group, c));
    divides = divides && group.order() % c.size() == 0;
  }
  r["classes"] = classes;
  r["center"] = labels_of(group, cs.center);
  bool inverses = true;
  for (Element g = 0; g < group.order(); ++g) inverses = inverses && group.inverse(group.inverse(g)) == g;
  rep.check_true("table_valid", true);
  rep.check_true("inverse_involution", inverses);
  rep.check_true("class_sizes_divide_order", divides);
  rep.check_true("identity_class_singleton", cs.classes.front().size() == 1);
  rep.check_true("center_normal_subgroup", group.is_normal_subgroup(cs.center));
}

// --- validate-irreps --------------------------------------------------------

void cmd_validate_irreps(Report& rep, const std::string& group_arg, const std::string& irreps_arg, double tol) {
  const auto [group, gj] = load_group(group_arg);
  rep.input("group", gj);
  const auto [set, ij] = load_irreps(irreps_arg, group, tol);
  rep.input("irreps", ij);
  auto& r = rep.results();
  json irreps = json::array();
  std::size_t sum_sq = 0;
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const auto& d = set[mu];
    sum_sq += d.dim() * d.dim();
    const auto cp = conjugate_partner(set, mu);
    irreps.push_back(json{{"label", d.label()},
                          {"dim", d.dim()},
                          {"centralizing_subgroup", labels_of(group, centralizing_subgroup(group, d, tol))},
                          {"conjugate_partner", set[cp.partner].label()}});
  }
  r["irreps"] = irreps;
  const auto ct = character_table(set);
  json table = json::object();
  json classes = json::array();
  for (const auto& c : ct.classes) classes.push_back(labels_of(group, c));
  table["classes"] = classes;
  json rows = json::array();
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    json row = json::array();
    for (std::size_t c = 0; c < ct.classes.size(); ++c) row.push_back(io::to_json(ct.values(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(c))));
    rows.push_back(row);
  }
  table["values"] = rows;
  r["character_table"] = table;
  rep.check("grand_orthogonality", set.residuals().grand_orthogonality, tol);
  rep.check("completeness", set.residuals().completeness, tol);
  rep.check("character_orthonormality", ct.orthonormality_residual(group.order()), tol);
  rep.check_equal("sum_of_squared_dims", static_cast<double>(sum_sq), static_cast<double>(group.order()));
}

// --- decompose --------------------------------------------------------------

void cmd_decompose(Report& rep, const std::string& group_arg, const std::string& irreps_arg, const std::string& element_arg,
                   double tol) {
  const auto [group, gj] = load_group(group_arg);
  rep.input("group", gj);
  const auto [set, ij] = load_irreps(irreps_arg, group, tol);
  rep.input("irreps", ij);
  const auto basis = adapted_basis(set);
  const auto res = basis_residuals(basis);
  const auto sub = center_and_subalgebras(basis);
  auto& r = rep.results();
  r["center_dim"] = sub.center_dim;
  r["abelian_dim"] = sub.abelian_dim;
  json zd = json::object();
  for (std::size_t mu = 0; mu < set.count(); ++mu) zd[set[mu].label()] = sub.centralizer_dims[mu];
  r["centralizer_dims"] = zd;
  rep.check("multiplication_law", res.multiplication_law, tol);
  rep.check("resolution_of_identity", res.resolution_of_identity, tol);
  rep.check("orthogonal_idempotents", res.orthogonal_idempotents, tol);
  rep.check("left_action", res.left_action, tol);
  rep.check("right_action", res.right_action, tol);
  rep.check_equal("center_dim", static_cast<double>(sub.center_dim), static_cast<double>(set.count()));
  rep.check_equal("abelian_dim", static_cast<double>(sub.abelian_dim), static_cast<double>(set.sum_dims()));
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const double expected = static_cast<double>(group.order() - set[mu].dim() * set[mu].dim() + 1);
    rep.check_equal("centralizer_dim/" + set[mu].label(), static_cast<double>(sub.centralizer_dims[mu]), expected);
  }
  rep.check("center_span", sub.center_span_mismatch, tol);
  rep.check("abelian_span", sub.abelian_span_mismatch, tol);
  rep.check("centralizer_span", sub.centralizer_span_mismatch, tol);
  rep.check("abelian_commutator", sub.abelian_commutator, tol);

  if (element_arg.empty()) return;
  const json ej = io::read_file(element_arg);
  rep.input("element", ej);
  const auto v = from_source(element_arg, [&] { return io::element_from_json(ej, group); });
  const auto sc = to_sectors(v, set);
  json blocks = json::object();
  for (std::size_t mu = 0; mu < set.count(); ++mu) blocks[set[mu].label()] = io::to_json(sc.blocks[mu]);
  r["sectors"] = blocks;
  const auto rank = rank_one_test(v, set);
  json ro{{"irreducible_member", rank.is_irreducible_member}, {"nonzero_blocks", rank.nonzero_blocks}};
  if (rank.is_irreducible_member) {
    ro["sector"] = set[*rank.mu].label();
    ro["left"] = io::to_json(rank.a);
    ro["right"] = io::to_json(rank.b);
  }
  r["rank_one"] = ro;
  r["star"] = io::to_json(star(group, v), group);
  const double scale = std::max(1.0, max_abs(v.coeffs));
  rep.check("element_round_trip", max_abs(from_sectors(sc, set).coeffs - v.coeffs) / scale, tol);
  const auto cfg = InnerProductConfig::for_set(set);
  rep.check("inner_product_routes", std::abs(inner_product(v, v) - inner_product(v, v, set, cfg)) / (scale * scale), tol);
}

// --- toy-model --------------------------------------------------------------

void cmd_toy_model(Report& rep, const std::string& group_arg, const std::string& irreps_arg, double tol) {
  const auto [group, gj] = load_group(group_arg);
  rep.input("group", gj);
  const auto [set, ij] = load_irreps(irreps_arg, group, tol);
  rep.input("irreps", ij);
  const ToyHilbert h(set);
  const auto o = observable_algebra(h);
  const auto t = truncate(h);
  const auto ro = restrict_observables(t, o);
  const auto wf = wightman_check(h, o);
  const auto wt = wightman_check(t, ro);
  const auto jf = jauch_check(h, o);
  const auto jt = jauch_check(t, ro);
  bool all_one = true;
  std::size_t sum_sq = 0;
  json dims = json::object();
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    all_one = all_one && set[mu].dim() == 1;
    sum_sq += set[mu].dim() * set[mu].dim();
    dims[set[mu].label()] = set[mu].dim();
  }
  auto& r = rep.results();
  r["block_dims"] = dims;
  r["dim"] = h.dim();
  r["truncated_dim"] = t.dim;
  r["observable_dim"] = o.dim;
  r["commutant_dims"] = json{{"full", wf.commutant_dim}, {"truncated", wt.commutant_dim}};
  r["wightman"] = json{{"full", wf.abelian}, {"truncated", wt.abelian}};
  r["jauch"] = json{{"full", jf.maximal_abelian}, {"truncated", jt.maximal_abelian}};
  json gauge = json::object();
  double scalar = 0.0, commut = 0.0, leak = 0.0;
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    json list = json::array();
    for (const auto& u : residual_gauge_action(h, t, mu, ro, tol)) {
      list.push_back(json{{"element", group.label(u.element)}, {"phase", io::to_json(u.phase)}});
      scalar = std::max(scalar, u.scalar_residual);
      commut = std::max(commut, u.commutator);
      leak = std::max(leak, u.leakage);
    }
    gauge[set[mu].label()] = list;
  }
  r["residual_gauge"] = gauge;
  rep.check_equal("observable_dim", static_cast<double>(o.dim), static_cast<double>(sum_sq));
  rep.check("observables_commute_with_right_action", o.right_commutator, tol);
  rep.check_equal("commutant_dim_full", static_cast<double>(wf.commutant_dim), static_cast<double>(group.order()));
  rep.check_true("wightman_full_matches_abelian_sectors", wf.abelian == all_one);
  rep.check_equal("commutant_dim_truncated", static_cast<double>(wt.commutant_dim), static_cast<double>(set.count()));
  rep.check_true("wightman_truncated", wt.abelian);
  rep.check_equal("truncated_observable_span", static_cast<double>(ro.span_dim), static_cast<double>(sum_sq));
  rep.check("truncation_invariant", ro.leakage, tol);
  rep.check_true("jauch_truncated", jt.maximal_abelian && jt.contained_in_observables);
  rep.check_true("jauch_full_matches_abelian_sectors", jf.maximal_abelian == all_one);
  rep.check("gauge_scalar", scalar, tol);
  rep.check("gauge_commutes_with_observables", commut, tol);
  rep.check("gauge_preserves_truncation", leak, tol);
}

// --- cover ------------------------------------------------------------------

/// Random closed walk at base point 0: a random walk followed by a shortest
/// path back. Empty when the base graph has no edges at 0.
std::vector<LoopStep> random_loop(const DiscreteCover& c, std::mt19937_64& rng, std::size_t steps) {
  std::vector<std::vector<LoopStep>> out_steps(c.base_size());
  for (std::size_t k = 0; k < c.edges().size(); ++k) {
    out_steps[c.edges()[k].from].push_back({k, true});
    out_steps[c.edges()[k].to].push_back({k, false});
  }
  auto head = [&](const LoopStep& s) { return s.forward ? c.edges()[s.edge].to : c.edges()[s.edge].from; };
  std::vector<LoopStep> loop;
  std::size_t at = 0;
  for (std::size_t k = 0; k < steps && !out_steps[at].empty(); ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, out_steps[at].size() - 1);
    loop.push_back(out_steps[at][pick(rng)]);
    at = head(loop.back());
  }
  // breadth-first path back to 0
  std::vector<std::optional<LoopStep>> via(c.base_size());
  std::vector<bool> seen(c.base_size(), false);
  std::queue<std::size_t> todo;
  todo.push(at);
  seen[at] = true;
  while (!todo.empty()) {
    const std::size_t u = todo.front();
    todo.pop();
    for (const auto& s : out_steps[u]) {
      const std::size_t w = head(s);
      if (!seen[w]) {
        seen[w] = true;
        via[w] = s;
        todo.push(w);
      }
    }
  }
  std::vector<LoopStep> back;
  for (std::size_t w = 0; w != at;) {
    const auto s = *via[w];
    back.push_back(s);
    w = s.forward ? c.edges()[s.edge].from : c.edges()[s.edge].to;
  }
  loop.insert(loop.end(), back.rbegin(), back.rend());
  return loop;
}

bool base_connected(const DiscreteCover& c) {
  std::vector<bool> seen(c.base_size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (const auto& e : c.edges())
      for (auto [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}})
        if (a == u && !seen[b]) {
          seen[b] = true;
          stack.push_back(b);
        }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

void cmd_cover(Report& rep, const std::string& spec_arg, const std::string& irreps_arg, double tol, std::uint64_t seed) {
  json sj;
  if (fs::is_regular_file(spec_arg)) {
    sj = io::read_file(spec_arg);
  } else if (const auto path = fs::path(fixture_dir()) / (spec_arg + ".cover.json"); fs::is_regular_file(path)) {
    sj = io::read_file(path.string());
  } else {
    throw Error(ErrorKind::MalformedInput, spec_arg + ": cannot open cover spec");
  }
  rep.input("cover", sj);
  const auto spec = from_source(spec_arg, [&] { return io::cover_spec_from_json(sj); });
  const auto [group, gj] = load_group(spec.group);
  rep.input("group", gj);
  const auto [set, ij] = load_irreps(irreps_arg, group, tol);
  rep.input("irreps", ij);
  rep.input("seed", seed);
  const auto c = from_source(spec_arg, [&] { return io::make_cover(spec, group); });
  const auto basis = adapted_basis(set);
  std::mt19937_64 rng(seed);
  const auto np = static_cast<Eigen::Index>(c.points());
  const std::size_t n = group.order();
  auto& r = rep.results();
  r["points"] = c.points();

  // F / E
  double round_trip = 0.0, isometry = 0.0, fe_equiv = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vector psi = random_matrix(np, 1, rng);
    const Vector lifted = lift_map_F(c, psi);
    fe_equiv = std::max(fe_equiv, equivariance_residual(c, lifted));
    round_trip = std::max(round_trip, max_abs(eval_map_E(c, lifted) - psi));
    isometry = std::max(isometry, std::abs(std::sqrt(equivariant_inner(c, lifted, lifted).real()) -
                                           std::sqrt(cover_inner(c, psi, psi).real())));
  }
  rep.check("lift_round_trip", round_trip, tol);
  rep.check("lift_isometry", isometry, std::min(tol, 1e-12));
  rep.check("lift_equivariant", fe_equiv, tol);

  // Right action: composition law and intertwining with pointwise multiplication.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Matrix>> units;
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      for (std::size_t j = 0; j < set[mu].dim(); ++j)
        units.emplace_back(mu, i, j, right_action_operator(c, basis.unit(mu, i, j)));
  double law = 0.0;
  for (const auto& [mu, i, j, a] : units)
    for (const auto& [nu, k, l, b] : units) {
      Matrix expected = Matrix::Zero(np, np);
      if (mu == nu && j == k)
        for (const auto& [m2, i2, j2, x] : units)
          if (m2 == mu && i2 == i && j2 == l) expected = x;
      law = std::max(law, max_abs(a * b - expected));
    }
  rep.check("right_action_composition", law, tol);
  const Matrix lift = lift_matrix(c);
  double intertwine = 0.0;
  for (int k = 0; k < 5; ++k) {
    const AlgebraElement v(random_matrix(static_cast<Eigen::Index>(n), 1, rng));
    intertwine = std::max(intertwine, max_abs(lift * right_action_operator(c, v) - pointwise_right_multiplication(c, v) * lift));
  }
  rep.check("right_action_intertwines_lift", intertwine, tol);

  // Sector projectors.
  Matrix total = Matrix::Zero(np, np);
  json ranks = json::object();
  double proj = 0.0;
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const auto d = static_cast<Eigen::Index>(set[mu].dim());
    const Matrix pa = sector_projector(c, set, mu, random_unit(d, rng));
    const Matrix pe = sector_projector(c, set, mu, unit_vector(set[mu].dim(), 0));
    const Matrix full = sector_projector(c, set, mu);
    total += full;
    for (const Matrix* p : {&pa, &pe, &full}) {
      const auto pr = projector_residual(*p);
      proj = std::max({proj, pr.idempotency, pr.hermiticity});
    }
    const auto expected = static_cast<double>(c.base_size() * set[mu].dim());
    rep.check_equal("projector_rank/" + set[mu].label(), static_cast<double>(numerical_rank(pa)), expected);
    rep.check_equal("projector_rank_e1/" + set[mu].label(), static_cast<double>(numerical_rank(pe)), expected);
    rep.check_equal("sector_rank/" + set[mu].label(), static_cast<double>(numerical_rank(full)),
                    expected * static_cast<double>(set[mu].dim()));
    ranks[set[mu].label()] = numerical_rank(pa);
  }
  r["projector_ranks"] = ranks;
  rep.check("projectors_orthogonal_hermitian", proj, tol);
  rep.check("projectors_sum_to_identity", max_abs(total - Matrix::Identity(np, np)), tol);

  // Invariant kernels and propagators.
  const auto hk = random_invariant_kernel(c, rng, true);
  const auto gk = random_invariant_kernel(c, rng, false);
  double commute = 0.0, projected = 0.0, combination = 0.0;
  const double t1 = 0.37, t2 = 0.81;
  const InvariantKernel k1(c, propagator(hk.matrix(), t1)), k2(c, propagator(hk.matrix(), t2)),
      k12(c, propagator(hk.matrix(), t1 + t2));
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const Vector a = random_unit(static_cast<Eigen::Index>(set[mu].dim()), rng);
    const Matrix p = sector_projector(c, set, mu, a);
    commute = std::max(commute, max_abs(p * gk.matrix() - gk.matrix() * p));
    const Matrix kp = project_kernel(c, set, gk, mu, a);
    projected = std::max({projected, max_abs(kp - p * gk.matrix()), max_abs(kp - gk.matrix() * p)});
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      combination = std::max(combination, max_abs(project_kernel(c, set, k1, mu, i) * project_kernel(c, set, k2, mu, i) -
                                                  project_kernel(c, set, k12, mu, i)));
  }
  rep.check("projectors_commute_with_kernels", commute, tol);
  rep.check("projected_kernel", projected, tol);
  rep.check("propagator_combination", combination, std::max(tol, 1e-9));

  // Structure of the sector decomposition.
  const auto th = theorem_checks(c, set, basis, rng);
  std::size_t worst_dim = 1;
  bool leakage_matches = true;
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    for (std::size_t d : th.image_commutant_dims[mu]) worst_dim = d != 1 ? d : worst_dim;
    const bool abelian_sector = set[mu].dim() == 1;
    leakage_matches = leakage_matches && ((th.right_action_leakage[mu] < tol) == abelian_sector);
  }
  rep.check_equal("irreducible_images", static_cast<double>(worst_dim), 1.0);
  rep.check("joint_reduction", th.reduction_mismatch, std::max(tol, 1e-8));
  rep.check_true("right_invariant_iff_abelian", leakage_matches);
  rep.check("centralizer_preserves_image", th.centralizer_leakage, tol);

  // Localization.
  std::vector<std::size_t> region;
  for (std::size_t q = 0; q < std::max<std::size_t>(1, c.base_size() / 2); ++q) region.push_back(q);
  const auto u = LocalizationRegion::of(c, region);
  const Matrix pu = localization_projector(c, u);
  const Matrix eval = eval_matrix(c);
  double loc_commute = 0.0, loc_equiv = 0.0, gamma_law = 0.0;
  bool adjoint_ok = true;
  for (int k = 0; k < 10; ++k) {
    AlgebraElement v(random_matrix(static_cast<Eigen::Index>(n), 1, rng));
    const bool hermitian = k % 2 == 0;
    if (hermitian) v = (v + star(group, v)) * 0.5;
    loc_commute = std::max(loc_commute, max_abs(pu * pointwise_right_multiplication(c, v) - pointwise_right_multiplication(c, v) * pu));
    const Matrix ov = localized_left_action(c, v, u);
    const Vector out = ov * (lift * random_matrix(np, 1, rng));
    loc_equiv = std::max(loc_equiv, equivariance_residual(c, out));
    const Matrix pulled = eval * ov * lift;
    adjoint_ok = adjoint_ok && ((max_abs(pulled - pulled.adjoint()) < tol) == hermitian);
  }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      const Matrix lhs = localized_left_action(c, AlgebraElement::basis(n, a), u) * localized_left_action(c, AlgebraElement::basis(n, b), u);
      gamma_law = std::max(gamma_law, max_abs((lhs - localized_left_action(c, AlgebraElement::basis(n, group.mul(a, b)), u)) * lift));
    }
  rep.check("localization_idempotent", max_abs(pu * pu - pu), tol);
  rep.check("localization_commutes_with_right_action", loc_commute, tol);
  rep.check("localized_action_equivariant", loc_equiv, tol);
  rep.check_true("localized_action_adjoint_iff_star_symmetric", adjoint_ok);
  rep.check("localized_action_group_law", gamma_law, tol);

  // Holonomy and gauge transformations need a connected base graph with loops.
  const bool connected_base = !c.edges().empty() && base_connected(c);
  r["connected_cover"] = connected_base && is_connected(c);
  if (connected_base) {
    double anti = 0.0, conj = 0.0;
    std::uniform_int_distribution<Element> pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    for (int k = 0; k < 100; ++k) {
      const auto l1 = random_loop(c, rng, len(rng));
      const auto l2 = random_loop(c, rng, len(rng));
      const Element h = pick(rng), s = pick(rng);
      const Element i12 = holonomy(c, 0, concatenate(l1, l2), h);
      anti += i12 != group.mul(holonomy(c, 0, l2, h), holonomy(c, 0, l1, h)) ? 1.0 : 0.0;
      const Element shifted = holonomy(c, 0, l1, group.mul(h, s));
      conj += shifted != group.conjugate(group.inverse(s), holonomy(c, 0, l1, h)) ? 1.0 : 0.0;
    }
    rep.check("holonomy_anti_homomorphism", anti, 0.5);
    rep.check("holonomy_sheet_conjugation", conj, 0.5);
    if (is_connected(c)) {
      const auto gt = gauge_transformations(c);
      const auto cs = conjugacy_structure(group);
      json values = json::array();
      bool fine = true;
      for (const auto& t : gt) {
        values.push_back(group.label(t.value_at_base));
        fine = fine && t.projects_to_identity && t.action_commutator == 0.0;
      }
      r["gauge_transformations"] = values;
      rep.check_equal("gauge_count", static_cast<double>(gt.size()), static_cast<double>(cs.center.size()));
      rep.check_true("gauge_bundle_automorphisms", fine);
    }
  }

  // C^mu action and time reversal.
  double cmu_agree = 0.0, cmu_equiv = 0.0, reversal = 0.0;
  json partners = json::object();
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const auto d = static_cast<Eigen::Index>(set[mu].dim());
    const Matrix sigma = equivariant_extension(c, set[mu], random_matrix(static_cast<Eigen::Index>(c.base_size()), d, rng));
    for (Element g : centralizing_subgroup(group, set[mu], tol)) {
      const auto act = c_mu_action(c, set, mu, g, sigma, tol);
      cmu_agree = std::max(cmu_agree, act.agreement);
      cmu_equiv = std::max(cmu_equiv, act.output_equivariance);
    }
    const auto tr = time_reversal(c, set, mu, random_unit(d, rng));
    reversal = std::max(reversal, tr.principal_angle_sine);
    partners[set[mu].label()] = set[tr.partner].label();
  }
  r["time_reversal_partners"] = partners;
  rep.check("c_mu_action", cmu_agree, tol);
  rep.check("c_mu_action_equivariant", cmu_equiv, tol);
  rep.check("time_reversal_subspaces", reversal, std::max(tol, 1e-8));
}

// --- rotor ------------------------------------------------------------------

json rotor_functions(const RotorBlock& b, const std::vector<RotorFunction>& fs) {
  json out = json::array();
  for (const auto& f : fs) {
    json terms = json::array();
    for (Eigen::Index k = 0; k < f.coeffs.size(); ++k)
      if (f.coeffs(k) != cplx(0.0))
        terms.push_back(json{b.two_m(k / b.dim), b.two_m(k % b.dim), f.coeffs(k).real(), f.coeffs(k).imag()});
    out.push_back(json{{"2M", f.two_m}, {"2N", f.two_n}, {"terms", terms}});
  }
  return out;
}

void cmd_rotor(Report& rep, int lambda_max, const std::vector<double>& a_raw, double tol) {
  if (lambda_max < 0 || lambda_max > 40) throw Error(ErrorKind::MalformedInput, "--lambda-max must be in [0, 40] (it is 2L)");
  if (a_raw.size() != 4) throw Error(ErrorKind::MalformedInput, "--a takes four numbers: re1,im1,re2,im2");
  Vector a(2);
  a << cplx(a_raw[0], a_raw[1]), cplx(a_raw[2], a_raw[3]);
  if (std::abs(a.norm() - 1.0) > 1e-10) throw Error(ErrorKind::NonUnitVector, "--a has norm " + std::to_string(a.norm()));
  const auto set = fixtures::d8star_set();
  rep.input("lambda_max", lambda_max);
  rep.input("a", a_raw);
  rep.input("irreps", io::to_json("d8star", set.group(), to_raw(set)));
  json rows = json::array();
  for (int tl = 0; tl <= lambda_max; ++tl) {
    const auto row = rotor_row(set, tl, a);
    const auto b = wigner_block(tl);
    const std::string tag = "2L=" + std::to_string(tl) + "/";
    json dims = json::object(), mults = json::object(), bases = json::object();
    for (const auto& s : row.sectors) {
      const std::string label = set[s.mu].label();
      dims[label] = s.dimension;
      mults[label] = s.multiplicity;
      rep.check_equal(tag + "multiplicity/" + label, static_cast<double>(s.multiplicity), static_cast<double>(s.expected_multiplicity));
      rep.check_equal(tag + "projector_rank/" + label, static_cast<double>(s.projector_rank),
                      static_cast<double>(s.multiplicity * set[s.mu].dim()));
      rep.check(tag + "generic_projector/" + label, s.generic_mismatch, tol);
      rep.check(tag + "projector/" + label, s.projector_residual, tol);
      rep.check(tag + "basis_image/" + label, s.image_mismatch, std::max(tol, 1e-8));
      rep.check(tag + "time_reversal/" + label, s.time_reversal_residual, tol);
      if (set[s.mu].dim() == 1 && tl % 2 == 0) {
        const auto [r2, r3] = abelian_signs(s.mu);
        const auto basis = abelian_sector_basis(b, r2, r3);
        rep.check_equal(tag + "basis_dim/" + label, static_cast<double>(s.basis_size), static_cast<double>(s.dimension));
        bases[label] = rotor_functions(b, basis.functions);
      } else if (set[s.mu].dim() == 2 && tl % 2 != 0) {
        const auto basis = spinor_sector_basis(b, a);
        rep.check_equal(tag + "spinor_family", static_cast<double>(basis.functions.size()), 0.5 * (tl + 1) * (tl + 1));
        rep.check_equal(tag + "spinor_span", static_cast<double>(basis.span_dim), 0.5 * (tl + 1) * (tl + 1));
        rep.check_equal(tag + "time_reversal_square", basis.time_reversal_square, -1.0);
        bases[label] = rotor_functions(b, basis.functions);
      }
    }
    rep.check(tag + "homomorphism", row.homomorphism_residual, tol);
    rep.check(tag + "unitarity", row.unitarity_residual, tol);
    rep.check(tag + "character", row.character_trace_mismatch, tol);
    rep.check_equal(tag + "rank_sum", static_cast<double>(row.rank_sum), static_cast<double>((tl + 1) * (tl + 1)));
    if (tl % 2 != 0) rep.check(tag + "spinor_orthogonality", row.spinor_orthogonality, tol);
    rows.push_back(json{{"2L", tl}, {"dimensions", dims}, {"multiplicities", mults}, {"rank_sum", row.rank_sum}, {"bases", bases}});
  }
  rep.results()["rows"] = rows;
}

json error_report(const std::string& command, const Error& e) {
  return json{{"command", command}, {"error", json{{"kind", to_string(e.kind())}, {"message", message_of(e)}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string command = args.empty() ? "" : args.front();
  if (command.empty() || (command.front() != '-' &&
                          std::find(kSubcommands.begin(), kSubcommands.end(), command) == kSubcommands.end())) {
    const Error e(ErrorKind::UnknownSubcommand, "'" + command + "'; expected one of validate-group, validate-irreps, decompose, toy-model, cover, rotor");
    err << "error: " << e.what() << "\n";
    out << error_report(command, e).dump(2) << "\n";
    return 2;
  }

  CLI::App app{"Superselection-sector toolkit: group algebras, sector projectors, covers and rotor bases"};
  app.name("sectorium");
  app.require_subcommand(1);
  double tol = kDefaultTol;
  std::string json_out;
  bool timing = false;
  app.add_option("--tol", tol, "Absolute threshold for residual checks")->capture_default_str();
  app.add_option("--json", json_out, "Also write the report to this file");
  app.add_flag("--timing", timing, "Include wall time in the report");

  std::string group_arg, irreps_arg, element_arg, spec_arg, check = "all";
  std::uint64_t seed = 1;
  int lambda_max = 4;
  std::vector<double> a_raw{1.0, 0.0, 0.0, 0.0};

  auto add_group = [&](CLI::App* sub, bool with_irreps) {
    sub->add_option("--group,group", group_arg, "Group name (bundled or fixture) or group JSON file")->required();
    if (with_irreps) sub->add_option("--irreps,irreps", irreps_arg, "Irreps JSON file (default: fixture for the group)");
  };
  auto* vg = app.add_subcommand("validate-group", "Validate a multiplication table and report its classes and center");
  add_group(vg, false);
  auto* vi = app.add_subcommand("validate-irreps", "Validate a complete set of unitary irreps");
  add_group(vi, true);
  auto* dc = app.add_subcommand("decompose", "Adapted basis, subalgebra dimensions and sector blocks of an element");
  add_group(dc, true);
  dc->add_option("--element", element_arg, "Algebra element JSON file");
  auto* tm = app.add_subcommand("toy-model", "Observables, truncation and Wightman/Jauch checks on the regular representation");
  add_group(tm, true);
  auto* cv = app.add_subcommand("cover", "Checks on functions over a finite cover");
  cv->add_option("spec", spec_arg, "Cover spec JSON file or fixture name")->required();
  cv->add_option("--irreps", irreps_arg, "Irreps JSON file (default: fixture for the group)");
  cv->add_option("--check", check, "Which checks to run")->check(CLI::IsMember({"all"}));
  cv->add_option("--seed", seed, "Random seed for sampled checks")->capture_default_str();
  auto* rt = app.add_subcommand("rotor", "Rotor sector dimensions, bases and time reversal for 2L = 0..lambda-max");
  rt->add_option("--lambda-max", lambda_max, "Largest 2L")->capture_default_str();
  rt->add_option("--a", a_raw, "Spinor amplitude re1,im1,re2,im2")->delimiter(',')->expected(4);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const Error wrapped(ErrorKind::MalformedInput, e.what());
    err << "error: " << wrapped.what() << "\n";
    out << error_report(command, wrapped).dump(2) << "\n";
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  Report rep(sub);
  rep.input("tol", tol);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (sub == "validate-group") cmd_validate_group(rep, group_arg);
    else if (sub == "validate-irreps") cmd_validate_irreps(rep, group_arg, irreps_arg, tol);
    else if (sub == "decompose") cmd_decompose(rep, group_arg, irreps_arg, element_arg, tol);
    else if (sub == "toy-model") cmd_toy_model(rep, group_arg, irreps_arg, tol);
    else if (sub == "cover") cmd_cover(rep, spec_arg, irreps_arg, tol, seed);
    else cmd_rotor(rep, lambda_max, a_raw, tol);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    out << error_report(sub, e).dump(2) << "\n";
    return 2;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << sub << ": " << (rep.all_pass() ? "all checks pass" : "some checks FAIL") << " in " << seconds << " s\n";
  json report = rep.to_json();
  if (timing) report["wall_time_s"] = seconds;
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    if (!f) {
      err << "error: cannot write " << json_out << "\n";
      return 2;
    }
    f << text;
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace sectorium::cli
