#include "hnflow/commands.hpp"

#include <sstream>

#include "hnflow/acceptance.hpp"
#include "hnflow/exponents.hpp"
#include "hnflow/scan.hpp"
#include "hnflow/simulate.hpp"

namespace hnflow {

namespace {

using nlohmann::json;

template <class K>
MatrixFamily<K> familyFromConfig(const RunConfig& cfg) {
  if (!cfg.has("matrices")) throw ConfigError("config: 'matrices' required");
  std::vector<Matrix<K>> samples;
  for (const auto& m : cfg.raw["matrices"])
    samples.push_back(parseMatrix<K>(m, cfg.field, "matrices"));
  MatrixFamily<K> fam(std::move(samples), cfg.raw.value("label", std::string()));
  if (cfg.dim && fam.dim != cfg.dim) throw ConfigError("config: matrix dim != dim");
  return fam;
}

Flow flowFromConfig(const RunConfig& cfg) {
  if (!cfg.has("flow")) throw ConfigError("config: 'flow' required");
  return parseFlow(cfg.raw["flow"], "flow");
}

template <class K>
std::vector<Subspace<K>> subspacesFromJson(const json& arr, const RunConfig& cfg, int dim,
                                           const std::string& what) {
  std::vector<Subspace<K>> out;
  for (const auto& rows : arr) {
    Matrix<K> m = parseMatrix<K>(rows, cfg.field, what);
    if (m.cols() != dim) throw ConfigError(what + ": ambient dim mismatch");
    out.push_back(Subspace<K>::fromRows(m));
  }
  return out;
}

template <class K>
json subspaceToJson(const Subspace<K>& s) {
  json rows = json::array();
  for (int i = 0; i < s.dim(); ++i) {
    bool rowRational = true;
    for (int j = 0; j < s.ambientDim(); ++j)
      if (!FieldTraits<K>::isRationalValue(s.basis()(i, j))) rowRational = false;
    json row = json::array();
    if (rowRational) {
      VecZ prim = primitiveRow<K>(s.basis().row(i).transpose());
      for (int j = 0; j < s.ambientDim(); ++j) row.push_back(prim(j).get_str());
    } else {
      for (int j = 0; j < s.ambientDim(); ++j)
        row.push_back(FieldTraits<K>::str(s.basis()(i, j)));
    }
    rows.push_back(row);
  }
  return rows;
}

json polygonToJson(const GraysonPolygon& p) {
  json verts = json::array();
  for (const auto& [d, v] : p.vertices) verts.push_back({{"dim", d}, {"value", v.str()}});
  json slopes = json::array();
  for (const auto& s : p.segmentSlopes()) slopes.push_back(s.str());
  return {{"vertices", verts}, {"slopes", slopes}};
}

template <class K>
json filtrationToJson(const HNFiltration<K>& f) {
  json chain = json::array();
  for (size_t i = 0; i < f.chain.size(); ++i)
    chain.push_back({{"dim", f.chain[i].dim()},
                     {"value", f.values[i].str()},
                     {"basis", subspaceToJson(f.chain[i])}});
  json slopes = json::array();
  for (const auto& s : f.slopes) slopes.push_back(s.str());
  return {{"chain", chain}, {"slopes", slopes}};
}

/// Candidate lattice per config: the inverse-tail-flag recipe (default on),
/// optional explicit generators, optional height-bounded enumeration (d<=3).
template <class K>
CandidateLattice<K> latticeFromConfig(const RunConfig& cfg, const MatrixFamily<K>& fam,
                                      const Flow& a) {
  std::vector<Subspace<K>> gens;
  bool useRecipe = true;
  int rounds = 8;
  if (cfg.has("candidates")) {
    const auto& c = cfg.raw["candidates"];
    useRecipe = c.value("use_flag_recipe", true);
    rounds = c.value("closure_rounds", 8);
    if (c.contains("generators")) {
      auto extra = subspacesFromJson<K>(c["generators"], cfg, fam.dim, "candidates.generators");
      gens.insert(gens.end(), extra.begin(), extra.end());
    }
    if (c.contains("height")) {
      auto hs = heightBoundedSubspaces<K>(fam.dim, c["height"].get<int>());
      gens.insert(gens.end(), hs.begin(), hs.end());
    }
  }
  if (useRecipe) {
    auto flags = familyFlagGenerators(fam, a);
    gens.insert(gens.end(), flags.begin(), flags.end());
  }
  return closeLattice(gens, fam.dim, rounds);
}

template <class K>
Report tauImpl(const RunConfig& cfg) {
  Report rep = Report::make("tau", cfg);
  auto fam = familyFromConfig<K>(cfg);
  Flow a = flowFromConfig(cfg);
  if (!cfg.has("subspaces")) throw ConfigError("tau: 'subspaces' required");
  auto subs = subspacesFromJson<K>(cfg.raw["subspaces"], cfg, fam.dim, "subspaces");
  json items = json::array();
  bool agreeAll = true;
  for (const auto& v : subs) {
    Rat viaWedge(0), viaPivot(0);
    for (size_t s = 0; s < fam.samples.size(); ++s) {
      Rat t1 = tauSingle(fam.samples[s], v, a);
      Rat t2 = tauPivot(fam.samples[s], v, a);
      if (s == 0 || viaWedge < t1) viaWedge = t1;
      if (s == 0 || viaPivot < t2) viaPivot = t2;
    }
    bool agree = viaWedge == viaPivot;
    agreeAll = agreeAll && agree;
    items.push_back({{"basis", subspaceToJson(v)},
                     {"dim", v.dim()},
                     {"tau", viaWedge.str()},
                     {"tau_pivot", viaPivot.str()},
                     {"agree", agree}});
  }
  rep.results["tau"] = items;
  rep.verdicts.push_back({"tau_formulas_agree", agreeAll, ""});
  return rep;
}

template <class K>
Report hnImpl(const RunConfig& cfg) {
  Report rep = Report::make("hn", cfg);
  auto fam = familyFromConfig<K>(cfg);
  Flow a = flowFromConfig(cfg);
  auto lat = latticeFromConfig(cfg, fam, a);
  auto oracle = memoized(tauOracle(fam, a));
  GraysonPolygon poly = graysonPolygon(oracle, lat);
  auto filt = hnFiltration(oracle, lat);
  auto lambda = slopesToLambda(poly);

  rep.results["lattice_size"] = lat.members.size();
  rep.results["saturated"] = lat.saturated;
  rep.results["polygon"] = polygonToJson(poly);
  rep.results["filtration"] = filtrationToJson(filt);
  json lamJ = json::array();
  for (const auto& l : lambda) lamJ.push_back(l.str());
  rep.results["lambda"] = lamJ;
  rep.results["semistable"] = filt.isTrivial();
  rep.verdicts.push_back({"lattice_saturated", lat.saturated, ""});
  rep.verdicts.push_back({"chain_matches_polygon", true, "checked exactly in hnFiltration"});
  return rep;
}

template <class K>
Report simulateImpl(const RunConfig& cfg) {
  Report rep = Report::make("simulate", cfg);
  auto fam = familyFromConfig<K>(cfg);
  Flow a = flowFromConfig(cfg);
  auto lat = latticeFromConfig(cfg, fam, a);
  auto filt = hnFiltration(memoized(tauOracle(fam, a)), lat);

  SimConfig<K> sc;
  sc.l = fam.samples.front();
  sc.a = a;
  if (!cfg.has("t_grid")) throw ConfigError("simulate: 't_grid' required");
  {
    const auto& g = cfg.raw["t_grid"];
    Rat start = parseRatField(g["start"], "t_grid.start");
    Rat stop = parseRatField(g["stop"], "t_grid.stop");
    Rat step = g.contains("step") ? parseRatField(g["step"], "t_grid.step") : Rat(1);
    if (!(Rat(0) < step)) throw ConfigError("t_grid: positive step required");
    for (Rat t = start; t <= stop; t += step) sc.tGrid.push_back(t);
  }
  sc.precisionMarginBits = cfg.raw.value("precision_margin_bits", 64);
  if (cfg.has("enumeration_bound_factor"))
    sc.enumerationBoundFactor = parseRatField(cfg.raw["enumeration_bound_factor"], "factor");

  auto series = simulate(sc, filt);
  int window = cfg.raw.value("slope_window", std::min<int>(8, static_cast<int>(series.snapshots.size())));
  auto slopes = estimateSlopes(series, window);
  Rat capEps = cfg.has("capture_epsilon")
                   ? parseRatField(cfg.raw["capture_epsilon"], "capture_epsilon")
                   : Rat(1, 2);
  auto verdicts = captureReport(series, filt, capEps);

  json snaps = json::array();
  json csv = json::array();
  for (const auto& s : series.snapshots) {
    json minimizers = json::array();
    for (const auto& m : s.minimizers) {
      json v = json::array();
      for (int i = 0; i < m.size(); ++i) v.push_back(m(i).get_str());
      minimizers.push_back(v);
    }
    snaps.push_back({{"t", s.t.str()},
                     {"log_minima", s.logMinima},
                     {"log_minima_over_t", s.logMinimaOverT},
                     {"minimizers", minimizers},
                     {"covol_log", s.covolLog},
                     {"minkowski_residual", s.minkowskiResidual},
                     {"in_predicted", s.inPredicted}});
    for (size_t k = 0; k < s.logMinima.size(); ++k) {
      std::ostringstream row;
      row << s.t.str() << "," << (k + 1) << "," << s.minima[k] << "," << s.logMinimaOverT[k]
          << ",\"";
      for (int i = 0; i < s.minimizers[k].size(); ++i)
        row << (i ? " " : "") << s.minimizers[k](i).get_str();
      row << "\"";
      for (bool b : s.inPredicted) row << "," << (b ? 1 : 0);
      csv.push_back(row.str());
    }
  }
  rep.results["snapshots"] = snaps;
  rep.results["csv_header"] = "t,k,lambda,log_lambda_over_t,minimizer,in_V_ell";
  rep.results["csv"] = csv;
  json lamPred = json::array(), lamEst = json::array();
  for (const auto& l : series.lambdaPredicted) lamPred.push_back(l.str());
  for (double sgl : slopes) lamEst.push_back(sgl);
  rep.results["lambda_predicted"] = lamPred;
  rep.results["slope_estimates"] = lamEst;
  json capt = json::array();
  for (size_t li = 0; li < series.captureTime.size(); ++li)
    capt.push_back({{"ell", li + 1},
                    {"capture_t", series.captureTime[li] ? series.captureTime[li]->str() : ""}});
  rep.results["capture_times"] = capt;

  double maxResid = 0;
  for (const auto& s : series.snapshots) maxResid = std::max(maxResid, s.minkowskiResidual);
  double bound = minkowskiBound(series.dim);
  rep.verdicts.push_back({"minkowski_residual_bound", maxResid <= bound,
                          "max " + std::to_string(maxResid) + " <= " + std::to_string(bound)});
  for (const auto& v : verdicts)
    rep.verdicts.push_back({"capture_ell_" + std::to_string(v.ell), v.pass,
                            v.pass ? ("from t=" + v.firstOkT->str()) : v.violation});
  return rep;
}

template <class K>
Report scanImpl(const RunConfig& cfg) {
  Report rep = Report::make("scan", cfg);
  auto fam = familyFromConfig<K>(cfg);
  if (!cfg.has("scan")) throw ConfigError("scan: 'scan' section required");
  const auto& sj = cfg.raw["scan"];
  ScanConfig<K> sc;
  sc.l = fam.samples.front();
  sc.epsilon = parseRatField(sj["epsilon"], "scan.epsilon");
  sc.height = sj["height"].get<long>();
  sc.includeZeroProducts = sj.value("include_zero_products", true);

  auto solutions = scanSolutions(sc);
  long cBound = operatorNormBound(sc.l);
  const int d = fam.dim;
  double dD = 5.0 * d * (std::log(static_cast<double>(cBound)) + 8.0 * d / sc.epsilon.toDouble());

  // flows from the rounding construction; census bound (6D)^d
  std::set<std::vector<long>> flowSet;
  long flowsChecked = 0, flowsVerified = 0;
  std::vector<Flow> inducedFlows;
  for (auto& sol : solutions) {
    if (sol.zeroProduct) continue;
    try {
      SolutionFlow f = solutionToFlow(sol.x, sc.l, sc.epsilon, cBound);
      sol.flowT = f.t;
      sol.flowWeights = f.n;
      ++flowsChecked;
      if (f.contractionVerified) ++flowsVerified;
      if (flowSet.insert(f.n).second) {
        std::vector<Rat> w;
        for (long nn : f.n) w.push_back(Rat(nn));
        inducedFlows.push_back(Flow(std::move(w)));
      }
    } catch (const std::invalid_argument&) {
      // t < 1: solution too small for the construction
    }
  }
  double censusBound = std::pow(6.0 * dD, d);

  // classification: exceptional subspaces over the induced flows, plus the
  // rational kernels of the individual forms (zero-product families)
  std::vector<Subspace<K>> classifyAgainst = rationalFormKernels<K>(sc.l);
  {
    auto exc = exceptionalSubspaces(fam, sc.epsilon, inducedFlows);
    classifyAgainst.insert(classifyAgainst.end(), exc.begin(), exc.end());
  }
  auto outliers = classifySolutions(solutions, classifyAgainst);
  double maxOutlierNorm = 0;
  for (size_t idx : outliers) maxOutlierNorm = std::max(maxOutlierNorm, solutions[idx].norm);

  json sols = json::array(), csv = json::array();
  for (const auto& s : solutions) {
    json xv = json::array();
    for (int i = 0; i < s.x.size(); ++i) xv.push_back(s.x(i).get_str());
    json flowJ = json::array();
    for (long nn : s.flowWeights) flowJ.push_back(nn);
    sols.push_back({{"x", xv},
                    {"norm", s.norm},
                    {"zero_product", s.zeroProduct},
                    {"product_log_lo", s.productLogLo},
                    {"product_log_hi", s.productLogHi},
                    {"subspace", s.assignedSubspace ? json(*s.assignedSubspace) : json()},
                    {"t", s.flowT ? json(*s.flowT) : json()},
                    {"flow", flowJ}});
    std::ostringstream row;
    row << "\"";
    for (int i = 0; i < s.x.size(); ++i) row << (i ? " " : "") << s.x(i).get_str();
    row << "\"," << s.norm << "," << (s.zeroProduct ? 1 : 0) << "," << s.productLogLo << ","
        << s.productLogHi << "," << (s.assignedSubspace ? std::to_string(*s.assignedSubspace) : "")
        << "," << (s.flowT ? std::to_string(*s.flowT) : "");
    csv.push_back(row.str());
  }
  rep.results["solutions"] = sols;
  rep.results["csv_header"] = "x,norm,zero_product,product_log_lo,product_log_hi,subspace,t";
  rep.results["csv"] = csv;
  json classJ = json::array();
  for (const auto& s : classifyAgainst) classJ.push_back(subspaceToJson(s));
  rep.results["classification_subspaces"] = classJ;
  rep.results["solution_count"] = solutions.size();
  rep.results["outlier_count"] = outliers.size();
  rep.results["max_outlier_norm"] = maxOutlierNorm;
  rep.results["distinct_flows"] = flowSet.size();
  rep.results["flow_census_bound"] = censusBound;
  rep.results["operator_norm_bound"] = cBound;

  rep.verdicts.push_back({"contraction_check", flowsVerified == flowsChecked,
                          std::to_string(flowsVerified) + "/" + std::to_string(flowsChecked) +
                              " flows verified ||a_t L x|| <= d e^-t"});
  rep.verdicts.push_back({"flow_census_bound", static_cast<double>(flowSet.size()) <= censusBound,
                          std::to_string(flowSet.size()) + " <= " + std::to_string(censusBound)});
  return rep;
}

template <class K>
Report exponentsImpl(const RunConfig& cfg) {
  Report rep = Report::make("exponents", cfg);
  if (!cfg.has("exponents")) throw ConfigError("exponents: 'exponents' section required");
  const auto& ej = cfg.raw["exponents"];
  int candHeight = ej.value("candidate_height", 5);

  if (ej.contains("hom_samples")) {
    std::vector<Matrix<K>> samples;
    for (const auto& m : ej["hom_samples"])
      samples.push_back(parseMatrix<K>(m, cfg.field, "exponents.hom_samples"));
    HomFamily<K> fam(std::move(samples));
    int d = fam.cols();
    std::vector<Subspace<K>> candidates = heightBoundedSubspaces<K>(d, candHeight);
    candidates.push_back(Subspace<K>::full(d));
    auto cert = betaFormula(fam, candidates);
    rep.results["beta"] = cert.beta.str();
    rep.results["beta_maximizer"] = subspaceToJson(cert.maximizer);
    rep.results["beta_rank"] = cert.r;
    rep.results["candidate_height"] = candHeight;
    if (ej.contains("alphas")) {
      QuasiNorm<K> qn;
      for (const auto& a : ej["alphas"]) qn.alphas.push_back(parseRatField(a, "alphas"));
      qn.dualBasis = ej.contains("dual_basis")
                         ? parseMatrix<K>(ej["dual_basis"], cfg.field, "dual_basis")
                         : [&] {
                             Matrix<K> id(d, d);
                             id.setConstant(FieldTraits<K>::zero());
                             for (int i = 0; i < d; ++i) id(i, i) = FieldTraits<K>::one();
                             return id;
                           }();
      auto ba = betaAlphaFormula(fam, candidates, qn);
      rep.results["beta_alpha"] = ba.betaAlpha.str();
      rep.results["beta_alpha_maximizer"] = subspaceToJson(ba.maximizer);
    }
  }

  if (ej.contains("y_samples")) {
    std::vector<Matrix<K>> ys;
    for (const auto& m : ej["y_samples"])
      ys.push_back(parseMatrix<K>(m, cfg.field, "exponents.y_samples"));
    int mm = static_cast<int>(ys.front().rows());
    int nn = static_cast<int>(ys.front().cols());
    std::vector<Subspace<K>> candidates = heightBoundedSubspaces<K>(mm + nn, candHeight);
    candidates.push_back(Subspace<K>::full(mm + nn));
    auto cert = omegaFormula(ys, candidates);
    rep.results["omega"] = cert.omega.str();
    rep.results["omega_certificate"] = {{"w", subspaceToJson(cert.w)},
                                        {"I", cert.setI},
                                        {"J", cert.setJ},
                                        {"r", cert.r},
                                        {"s", cert.s}};
  }

  if (ej.contains("gamma_bridge")) {
    const auto& gb = ej["gamma_bridge"];
    int n = gb["n"].get<int>(), m = gb["m"].get<int>();
    GraysonPolygon poly;
    if (gb.contains("polygon")) {
      for (const auto& v : gb["polygon"])
        poly.vertices.emplace_back(v["dim"].get<int>(), parseRatField(v["value"], "polygon"));
    } else if (cfg.has("matrices")) {
      // polygon of the configured family under the (n,...,n,-m,...,-m) flow
      auto fam = familyFromConfig<K>(cfg);
      std::vector<Rat> w;
      for (int i = 0; i < m; ++i) w.push_back(Rat(n));
      for (int j = 0; j < n; ++j) w.push_back(Rat(-m));
      Flow a(w);
      auto lat = latticeFromConfig(cfg, fam, a);
      auto oracle = memoized(tauOracle(fam, a));
      poly = graysonPolygon(oracle, lat);
    } else {
      throw ConfigError("gamma_bridge: polygon or matrices required");
    }
    Rat beta = gammaBridge(poly, n, m);
    rep.results["gamma_bridge"] = {{"n", n},
                                   {"m", m},
                                   {"polygon", polygonToJson(poly)},
                                   {"beta", beta.str()}};
  }

  rep.verdicts.push_back({"exponents_computed", true, ""});
  return rep;
}

template <class K>
Report dispatchTyped(const std::string& name, const RunConfig& cfg) {
  if (name == "tau") return tauImpl<K>(cfg);
  if (name == "hn") return hnImpl<K>(cfg);
  if (name == "simulate") return simulateImpl<K>(cfg);
  if (name == "scan") return scanImpl<K>(cfg);
  if (name == "exponents") return exponentsImpl<K>(cfg);
  throw ConfigError("unknown command: " + name);
}

}  // namespace

Report cmdTau(const RunConfig& cfg) { return runCommand("tau", cfg); }
Report cmdHn(const RunConfig& cfg) { return runCommand("hn", cfg); }
Report cmdSimulate(const RunConfig& cfg) { return runCommand("simulate", cfg); }
Report cmdScan(const RunConfig& cfg) { return runCommand("scan", cfg); }
Report cmdExponents(const RunConfig& cfg) { return runCommand("exponents", cfg); }

Report cmdVerify(const RunConfig& cfg) {
  Report rep = Report::make("verify", cfg);
  auto results = runAcceptanceSuite(cfg.raw.value("only", std::string()));
  json rows = json::array();
  for (const auto& r : results) {
    rep.verdicts.push_back({r.name, r.pass, r.detail});
    rows.push_back({{"criterion", r.name},
                    {"pass", r.pass},
                    {"detail", r.detail},
                    {"seconds", r.seconds}});
  }
  rep.results["criteria"] = rows;
  return rep;
}

Report runCommand(const std::string& name, const RunConfig& cfg) {
  if (name == "verify") return cmdVerify(cfg);
  if (cfg.field) return dispatchTyped<NFElem>(name, cfg);
  return dispatchTyped<Rat>(name, cfg);
}

}  // namespace hnflow
