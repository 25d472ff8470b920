#include "maslov/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <json.hpp>
#include <optional>

#include "maslov/artifacts.hpp"
#include "maslov/error.hpp"
#include "maslov/invariance.hpp"
#include "maslov/maslovbox.hpp"
#include "maslov/problem.hpp"

namespace maslov {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config;
  int x_steps = 0;
  int lambda_steps = 0;
  std::vector<double> lambda;
  bool no_rescale = false;
  std::string out_dir = "maslov-out";
  int refine = 2;
  bool scan = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("config", f.config, "config JSON path or catalog name")->required();
  cmd->add_option("--x-steps", f.x_steps, "x grid steps")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda-steps", f.lambda_steps, "lambda grid steps")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", f.lambda, "lambda interval L1 L2")->expected(2);
  cmd->add_flag("--no-rescale", f.no_rescale, "disable column rescaling during propagation");
  cmd->add_option("--out", f.out_dir, "output directory");
}

SpectralProblem build(const CommonFlags& f) {
  ProblemConfig cfg;
  if (fs::exists(f.config)) {
    cfg = load_config_file(f.config);
  } else {
    auto names = catalog_names();
    if (std::find(names.begin(), names.end(), f.config) == names.end())
      throw Error(ErrorKind::Config, "no such config file or catalog problem: \"" + f.config + "\"");
    cfg = builtin_catalog(f.config);
  }
  if (f.x_steps > 0) cfg.x_steps = f.x_steps;
  if (f.lambda_steps > 0) cfg.lambda_steps = f.lambda_steps;
  if (f.lambda.size() == 2) {
    cfg.lambda1 = f.lambda[0];
    cfg.lambda2 = f.lambda[1];
  }
  SpectralProblem p = load_problem(cfg);
  p.rescale = !f.no_rescale;
  return p;
}

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Config, "cannot create output directory \"" + dir + "\"");
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

json crossings_json(const std::vector<CrossingRecord>& recs) {
  json arr = json::array();
  for (const auto& r : recs)
    arr.push_back({{"param", r.t},
                   {"param_end", r.t_end},
                   {"kind", crossing_kind_name(r.kind)},
                   {"direction", r.direction},
                   {"contribution", r.contribution}});
  return arr;
}

json violation_json(const InvarianceError& e) {
  return {{"shelf", e.shelf()}, {"node", e.node()}, {"param", e.param()}, {"message", e.what()}};
}

void print_list(std::ostream& out, const char* label, const std::vector<double>& v) {
  out << label << ":";
  for (double d : v) out << " " << format_double(d);
  out << "\n";
}

int cmd_box(const CommonFlags& f, std::ostream& out) {
  SpectralProblem p = build(f);
  prepare_out(f.out_dir);
  json summary;
  summary["command"] = "box";
  summary["lambda"] = {p.lambda1, p.lambda2};
  summary["x_steps"] = p.x_steps;
  summary["lambda_steps"] = p.lambda_steps;

  BoxContext ctx(p);
  for (Shelf s : {Shelf::Bottom, Shelf::Right, Shelf::Top, Shelf::Left})
    write_file(path_in(f.out_dir, std::string("shelf_") + shelf_name(s) + ".csv"),
               shelf_csv(shelf_path(ctx, s)));

  RhoScanOptions so;
  so.candidate_rho = 0.0;
  so.classify = false;
  RhoScan scan = rho_grid_scan(p, so);
  auto curve = marching_squares(scan.psi1, scan.xs, scan.lambdas);

  std::vector<Marker> marks;
  int code = 0;
  try {
    MaslovBoxReport r = compute_box(p);
    summary["ind_bottom"] = r.ind_bottom;
    summary["ind_right"] = r.ind_right;
    summary["ind_top"] = r.ind_top;
    summary["ind_left"] = r.ind_left;
    summary["m_frak"] = r.m_frak;
    summary["lower_bound"] = r.lower_bound;
    summary["left_crossings"] = r.left_crossings;
    summary["eigenvalues"] = r.eigenvalues;
    summary["degenerate_candidates"] = r.degenerate_candidates;
    json mv = json::array();
    for (const auto& v : r.monotonicity_violations) mv.push_back({{"x", v.x}, {"direction", v.direction}});
    summary["monotonicity_violations"] = mv;
    summary["anomalies"] = r.anomalies;
    summary["left_records"] = crossings_json(r.left_records);
    summary["top_records"] = crossings_json(r.top_records);
    out << "indices: bottom " << r.ind_bottom << ", right " << r.ind_right << ", top " << r.ind_top
        << ", left " << r.ind_left << "\n";
    out << "m_frak: " << r.m_frak << "\n";
    out << "lower_bound: " << r.lower_bound << "\n";
    print_list(out, "left_crossings", r.left_crossings);
    print_list(out, "eigenvalues", r.eigenvalues);
    for (double x : r.left_crossings) marks.push_back({p.lambda1, x, "crimson", "crossing x=" + format_double(x)});
    for (double l : r.eigenvalues) marks.push_back({l, 1.0, "darkgreen", "eigenvalue " + format_double(l)});
  } catch (const InvarianceError& e) {
    code = 2;
    summary["invariance_violation"] = violation_json(e);
    out << "invariance violation: " << e.what() << "\n";
    auto eig = localize_eigenvalues_top(p, 1e-10);
    summary["eigenvalues"] = eig.eigenvalues;
    print_list(out, "eigenvalues", eig.eigenvalues);
    try {
      auto lc = renormalized_count(p);
      summary["left_count"] = lc.count;
      summary["left_crossings"] = lc.xs;
      out << "left_count: " << lc.count << "\n";
      print_list(out, "left_crossings", lc.xs);
    } catch (const InvarianceError&) {
    }
  }
  write_file(path_in(f.out_dir, "box.svg"),
             box_svg(p.lambda1, p.lambda2, curve, marks, "Maslov box and spectral curves"));
  write_file(path_in(f.out_dir, "summary.json"), summary.dump(2) + "\n");
  return code;
}

int cmd_invariance(const CommonFlags& f, std::ostream& out) {
  SpectralProblem p = build(f);
  prepare_out(f.out_dir);
  json summary;
  summary["command"] = "invariance";
  InvarianceReport r = constants_report(p);
  summary["C_a"] = r.C_a;
  summary["C_A"] = r.C_A;
  summary["c_g"] = r.c_g;
  summary["c_g_exact"] = r.c_g_exact;
  summary["c_h"] = r.c_h;
  summary["C_g"] = r.C_g;
  summary["C_g_measured"] = r.C_g_measured;
  summary["C_g_bound"] = r.C_g_bound;
  summary["C_h"] = r.C_h;
  summary["C_d"] = r.C_d;
  summary["delta"] = r.delta;
  summary["delta_method"] = r.delta_method;
  summary["C"] = r.C;
  summary["rho0"] = r.rho0;
  summary["margin"] = r.margin;
  summary["certified"] = r.certified;
  summary["bounds_hold"] = r.bounds_hold;
  out << "C_a " << format_double(r.C_a) << "\nC_A " << format_double(r.C_A) << "\nc_g "
      << format_double(r.c_g) << (r.c_g_exact ? " (exact)" : " (measured)") << "\nc_h "
      << format_double(r.c_h) << "\nC_g " << format_double(r.C_g) << "\nC_g_measured "
      << format_double(r.C_g_measured) << "\nC_g_bound " << format_double(r.C_g_bound) << "\nC_h "
      << format_double(r.C_h) << "\nC_d " << format_double(r.C_d) << "\ndelta " << format_double(r.delta)
      << " (" << r.delta_method << ")\nC " << format_double(r.C) << "\nrho0 " << format_double(r.rho0)
      << "\nmargin " << format_double(r.margin) << "\ncertified " << (r.certified ? "true" : "false")
      << "\nbounds_hold " << (r.bounds_hold ? "true" : "false") << "\n";
  if (p.alphas) {
    auto bc = bc_conditions_check(p);
    summary["bc_conditions"] = {{"det_first", bc.det_first}, {"det_second", bc.det_second}, {"satisfied", bc.satisfied}};
    out << "bc_conditions " << format_double(bc.det_first) << " " << format_double(bc.det_second) << " "
        << (bc.satisfied ? "satisfied" : "not satisfied") << "\n";
  }
  if (f.scan) {
    RhoScanOptions so;
    so.refine_rounds = f.refine;
    RhoScan s = rho_grid_scan(p, so);
    summary["min_rho"] = s.min_rho;
    summary["argmin"] = {s.argmin_x, s.argmin_lambda};
    json lps = json::array();
    std::vector<Marker> marks;
    int total = 0;
    for (const auto& lp : s.loss_points) {
      lps.push_back({{"x", lp.x_star}, {"lambda", lp.lambda_star}, {"rho", lp.rho},
                     {"i_minus", lp.i_minus}, {"i_plus", lp.i_plus}, {"local_m", lp.local_m},
                     {"consistent", lp.consistent}, {"boundary_index", lp.boundary_index}});
      total += lp.local_m;
      marks.push_back({lp.lambda_star, lp.x_star, "black", "loss point"});
      out << "loss point x " << format_double(lp.x_star) << " lambda " << format_double(lp.lambda_star)
          << " local_m " << lp.local_m << "\n";
    }
    summary["loss_points"] = lps;
    summary["loss_point_total"] = total;
    out << "min_rho " << format_double(s.min_rho) << " at x " << format_double(s.argmin_x) << " lambda "
        << format_double(s.argmin_lambda) << "\n";
    out << "loss_points " << s.loss_points.size() << "\nloss_point_total " << total << "\n";
    std::string csv = "x,lambda,rho\n";
    for (Eigen::Index j = 0; j < s.rho.cols(); ++j)
      for (Eigen::Index i = 0; i < s.rho.rows(); ++i)
        csv += format_double(s.xs[i]) + "," + format_double(s.lambdas[j]) + "," + format_double(s.rho(i, j)) + "\n";
    write_file(path_in(f.out_dir, "rho_grid.csv"), csv);
    write_file(path_in(f.out_dir, "rho.svg"), heatmap_svg(s.rho, s.xs, s.lambdas, marks, "rho over the box"));
  }
  write_file(path_in(f.out_dir, "summary.json"), summary.dump(2) + "\n");
  return 0;
}

int cmd_left_shelf(const CommonFlags& f, std::ostream& out) {
  SpectralProblem p = build(f);
  prepare_out(f.out_dir);
  json summary;
  summary["command"] = "left-shelf";
  auto c = renormalized_count(p);
  auto audit = monotonicity_audit(p);
  summary["count"] = c.count;
  summary["crossings"] = c.xs;
  json a = json::array();
  bool all_ok = true;
  for (const auto& e : audit) {
    a.push_back({{"x", e.x}, {"ratio", e.ratio}, {"ok", e.ok}});
    all_ok = all_ok && e.ok;
  }
  summary["audit"] = a;
  summary["audit_ok"] = all_ok;
  out << "count: " << c.count << "\n";
  print_list(out, "crossings", c.xs);
  for (const auto& e : audit)
    out << "audit x " << format_double(e.x) << " ratio " << format_double(e.ratio) << (e.ok ? "" : " FLAGGED")
        << "\n";
  write_file(path_in(f.out_dir, "shelf_left.csv"), shelf_csv(shelf_path(p, Shelf::Left)));
  write_file(path_in(f.out_dir, "summary.json"), summary.dump(2) + "\n");
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renormalized Maslov index counting for linear eigenvalue problems", "maslov"};
  app.require_subcommand(1);
  CommonFlags box_f, inv_f, left_f;
  auto* box = app.add_subcommand("box", "index on the four shelves, lower bound, eigenvalues");
  add_common(box, box_f);
  auto* inv = app.add_subcommand("invariance", "invariance constants, certificate and optional scan");
  add_common(inv, inv_f);
  inv->add_flag("--scan", inv_f.scan, "scan rho over the full grid and classify loss points");
  inv->add_option("--refine", inv_f.refine, "local refinement rounds for loss points")->check(CLI::NonNegativeNumber);
  auto* left = app.add_subcommand("left-shelf", "renormalized count and monotonicity audit");
  add_common(left, left_f);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }
  try {
    if (*box) return cmd_box(box_f, out);
    if (*inv) return cmd_invariance(inv_f, out);
    if (*left) return cmd_left_shelf(left_f, out);
  } catch (const InvarianceError& e) {
    err << "invariance violation: " << e.what() << "\n";
    return 2;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << kind_name(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::InvarianceViolation ? 2 : e.kind() == ErrorKind::BlowUp ? 3 : 1;
  }
  return 1;
}

}  // namespace maslov
