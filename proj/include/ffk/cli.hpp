#pragma once

// Command-line front end. `run` parses arguments, dispatches on the frame's
// field and writes JSON to `out`; failures become an error object on `err`.
//
// Exit codes: 0 success, 1 error, 2 analyzed family is Bessel-only.

#include <iostream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "ffk/duality.hpp"
#include "ffk/io.hpp"
#include "ffk/systems.hpp"

namespace ffk::cli {

inline json error_object(const std::string& code, const std::string& message,
                         std::optional<std::size_t> member = std::nullopt, const std::string& where = "") {
  json e{{"code", code}, {"message", message}};
  e["member"] = member ? json(*member) : json(nullptr);
  e["where"] = where.empty() ? json(nullptr) : json(where);
  return {{"error", e}};
}

inline json bounds_json(const FrameBounds& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }
inline json range_json(const RedundancyRange& r) { return {{"lower", r.lower}, {"upper", r.upper}}; }

inline json ratio_json(const RatioBoundCheck& c) {
  return {{"lower", c.lower},       {"upper", c.upper},           {"observed_min", c.observed_min},
          {"observed_max", c.observed_max}, {"samples", c.samples}, {"violations", c.violations},
          {"holds", c.holds}};
}

inline json certificate_json(const RobustnessCertificate& c) {
  json levels = json::array();
  for (const auto& l : c.levels) {
    json lj{{"erasures", l.erasures},         {"all_survive", l.all_survive},
            {"some_survive", l.some_survive}, {"weight_bound", l.weight_bound},
            {"worst_lower", l.worst_lower},   {"subsets_checked", l.subsets_checked}};
    auto one_based = [](const std::vector<std::size_t>& idx) {
      json a = json::array();
      for (std::size_t i : idx) a.push_back(i + 1);
      return a;
    };
    lj["counterexample"] = l.counterexample.empty() ? json(nullptr) : one_based(l.counterexample);
    lj["witness"] = l.witness.empty() ? json(nullptr) : one_based(l.witness);
    levels.push_back(std::move(lj));
  }
  return {{"certified", c.certified},
          {"rule", c.rule},
          {"mode", c.exhaustive ? "exhaustive" : "greedy"},
          {"budget", c.budget},
          {"levels", levels}};
}

struct Options {
  std::string frame_path;
  std::string second_path;
  std::string report_path;
  std::string at_path;
  std::string out_path;
  std::string operator_path;
  std::string example_name;
  std::string field = "complex";
  std::optional<double> tol_eig;
  std::optional<std::size_t> n;
  std::optional<std::size_t> budget;
  std::vector<std::size_t> remove;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  bool canonical = false;
  bool exhaustive = false;
  bool greedy = false;
};

namespace detail {

template <FieldScalar Scalar>
int analyze(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  ReportOptions ro;
  ro.seed = o.seed;
  ro.samples = o.samples;
  const json doc = to_json(make_report(loaded.frame, ro));
  if (!o.report_path.empty()) write_json_file(o.report_path, doc);
  out << doc.dump(2) << '\n';
  return loaded.frame.bessel_only() ? 2 : 0;
}

template <FieldScalar Scalar>
int redundancy(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  const auto n = static_cast<std::size_t>(loaded.frame.ambient_dim());
  Vec<Scalar> x = parse_vector_document<Scalar>(read_json_file(o.at_path), n);
  const double norm = x.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::ZeroVector, "redundancy needs a nonzero vector");
  x /= norm;
  out << json{{"redundancy", redundancy_at(loaded.frame, x)}, {"input_norm", norm}}.dump(2) << '\n';
  return 0;
}

template <FieldScalar Scalar>
int dual(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  if (!o.canonical) throw Error(ErrorCode::ParseError, "only --canonical duals can be generated");
  const FusionFrame<Scalar>& frame = loaded.frame;
  const FusionFrame<Scalar> d = canonical_dual_fusion(frame);
  const json doc = to_json(document_from_frame(d));
  const CanonicalDualBracket bracket = canonical_dual_bracket(frame, d);
  json summary{{"bounds", bounds_json(frame_bounds(d))},
               {"predicted", bounds_json(bracket.predicted)},
               {"condition", bracket.condition},
               {"bracketed", bracket.bracketed},
               {"reconstruction_residual", verify_alternate_dual(frame, d).residual}};
  if (unit_weights(frame, frame.tolerance().eig_rel)) {
    Rng rng(o.seed);
    summary["ratio_bounds"] = ratio_json(canonical_ratio_bounds(frame, o.samples, rng));
  } else {
    summary["ratio_bounds"] = nullptr;
  }
  if (o.out_path.empty()) {
    summary["dual"] = doc;
  } else {
    write_json_file(o.out_path, doc);
    summary["dual"] = o.out_path;
  }
  out << summary.dump(2) << '\n';
  return 0;
}

template <FieldScalar Scalar>
int verify_dual(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  const FrameDocument cand_doc = read_frame_document(o.second_path);
  const auto cand = load_as<Scalar>(cand_doc, loaded.frame.tolerance());
  const DualCertificate c = verify_alternate_dual(loaded.frame, cand.frame);
  json r{{"residual", c.residual}, {"is_dual", c.is_dual}, {"bessel_bound", c.bessel_bound}};
  if (c.is_dual) {
    Rng rng(o.seed);
    const AlternateDualBounds b = alternate_dual_bounds(loaded.frame, cand.frame, o.samples, rng);
    r["dual_bounds"] = {{"lower", b.lower},
                        {"upper", b.upper},
                        {"observed", {{"lower", b.observed.min}, {"upper", b.observed.max}}},
                        {"holds", b.bounds_hold},
                        {"ratio", b.ratio ? ratio_json(*b.ratio) : json(nullptr)}};
  }
  out << r.dump(2) << '\n';
  return 0;
}

template <FieldScalar Scalar>
int erasure(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  const FusionFrame<Scalar>& frame = loaded.frame;
  json r;
  if (!o.remove.empty()) {
    std::vector<std::size_t> idx;
    for (std::size_t i : o.remove) {
      if (i < 1) throw Error(ErrorCode::InvalidIndex, "member indices start at 1");
      idx.push_back(i - 1);
    }
    const Erasure<Scalar> e = erase(frame, idx);
    r["removal"] = {{"erased_weight", e.erased_weight},
                    {"guaranteed_lower", e.guaranteed_lower ? json(*e.guaranteed_lower) : json(nullptr)},
                    {"remaining_lower", e.remaining_lower},
                    {"remaining_is_frame", e.remaining_is_frame},
                    {"guarantee_verified", e.guarantee_verified}};
  }
  const std::size_t budget = o.budget.value_or(std::min<std::size_t>(frame.size() - 1, 4));
  const ErasureSearch mode = o.greedy ? ErasureSearch::Greedy : ErasureSearch::Exhaustive;
  r["certificate"] = frame.size() > 1 ? certificate_json(max_robust_erasures(frame, budget, mode))
                                      : certificate_json(RobustnessCertificate{});
  out << r.dump(2) << '\n';
  return 0;
}

template <FieldScalar Scalar>
int transform(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  const auto n = static_cast<std::size_t>(loaded.frame.ambient_dim());
  const Mat<Scalar> op = parse_matrix_document<Scalar>(read_json_file(o.operator_path), n);
  const FusionFrame<Scalar> image = apply_operator(loaded.frame, op);
  const TransformReport t = transform_report(loaded.frame, image, op);
  const json doc = to_json(document_from_frame(image));
  json r{{"condition", t.condition},
         {"predicted_bounds", bounds_json(t.predicted)},
         {"image_bounds", bounds_json(t.image_bounds)},
         {"bounds_bracketed", t.bounds_bracketed},
         {"redundancy", range_json(t.original)},
         {"image_redundancy", range_json(t.image)},
         {"redundancy_sandwich", t.redundancy_sandwich}};
  if (o.out_path.empty()) {
    r["image"] = doc;
  } else {
    write_json_file(o.out_path, doc);
    r["image"] = o.out_path;
  }
  out << r.dump(2) << '\n';
  return 0;
}

template <FieldScalar Scalar>
int system(const LoadedFrame<Scalar>& loaded, const Options& o, std::ostream& out) {
  if (!loaded.system) throw Error(ErrorCode::ParseError, "document has no local_frames", std::nullopt, "$.local_frames");
  const FusionFrameSystem<Scalar>& sys = *loaded.system;
  const FusionFrame<Scalar>& frame = sys.frame();
  const double rel = frame.tolerance().eig_rel;

  Rng rng(o.seed);
  bool orthogonal = true;
  double gap = 0.0;
  for (std::size_t s = 0; s < o.samples; ++s) {
    const LocalAdditivity a = check_local_additivity(sys, random_unit_vector<Scalar>(frame.ambient_dim(), rng));
    orthogonal = a.orthogonal_locals;
    gap = std::max(gap, std::abs(a.fusion_value - a.local_sum));
  }
  json r;
  r["local_additivity"] = {{"orthogonal_locals", orthogonal},
                           {"samples", o.samples},
                           {"max_gap", gap},
                           {"equal", gap <= 1e-9}};

  bool parseval_locals = true;
  for (std::size_t i = 0; i < frame.size(); ++i) parseval_locals = parseval_locals && local_parseval(sys, i);
  r["parseval_locals"] = parseval_locals;
  if (parseval_locals) {
    const ParsevalEquivalence p = parseval_equivalences(sys);
    r["parseval_equivalence"] = {{"global_parseval", p.global_parseval},
                                 {"orthonormal_parseval", p.orthonormal_parseval},
                                 {"fusion_parseval", p.fusion_parseval},
                                 {"consistent", p.consistent}};
  } else {
    r["parseval_equivalence"] = nullptr;
  }
  if (parseval_locals && unit_weights(frame, rel)) {
    const RedundancyOneEquivalence e = redundancy_one_equivalence(sys);
    r["redundancy_one_equivalence"] = {{"flat_parseval", e.flat_parseval},
                                       {"fusion_redundancy_one", e.fusion_redundancy_one},
                                       {"consistent", e.consistent}};
  } else {
    r["redundancy_one_equivalence"] = nullptr;
  }
  out << r.dump(2) << '\n';
  return 0;
}

template <typename Fn>
int with_frame(const Options& o, Fn&& fn) {
  Tolerance tol;
  if (o.tol_eig) tol.eig_rel = *o.tol_eig;
  if (!tol.valid()) throw Error(ErrorCode::ParseError, "tolerances must be positive");
  AnyLoadedFrame loaded = load_frame(o.frame_path, tol);
  return std::visit([&](const auto& f) { return fn(f); }, loaded);
}

}  // namespace detail

/// Runs one command; argv[0] is the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fusion frame analysis toolkit", "ffk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("frame", o.frame_path, "Frame document")->required()->check(CLI::ExistingFile);
    sub->add_option("--tol-eig", o.tol_eig, "Relative eigenvalue tolerance");
    sub->add_option("--seed", o.seed, "Seed for sampled checks");
    sub->add_option("--samples", o.samples, "Number of sampled unit vectors");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Bounds, redundancy, structure and erasure robustness");
  add_common(analyze);
  analyze->add_option("--report", o.report_path, "Also write the report to this file");

  CLI::App* redundancy = app.add_subcommand("redundancy", "Redundancy function at a vector");
  add_common(redundancy);
  redundancy->add_option("--at", o.at_path, "Vector document")->required()->check(CLI::ExistingFile);

  CLI::App* dual = app.add_subcommand("dual", "Canonical dual fusion frame");
  add_common(dual);
  dual->add_flag("--canonical", o.canonical, "Canonical dual")->required();
  dual->add_option("--out", o.out_path, "Write the dual document here");

  CLI::App* verify = app.add_subcommand("verify-dual", "Check an alternate dual candidate");
  add_common(verify);
  verify->add_option("candidate", o.second_path, "Candidate frame document")->required()->check(CLI::ExistingFile);

  CLI::App* erasure = app.add_subcommand("erasure", "Erasure robustness");
  add_common(erasure);
  erasure->add_option("--budget", o.budget, "Largest number of erasures to examine");
  auto* ex = erasure->add_flag("--exhaustive", o.exhaustive, "Examine every subset (default)");
  auto* gr = erasure->add_flag("--greedy", o.greedy, "Adversarial greedy removal");
  ex->excludes(gr);
  erasure->add_option("--remove", o.remove, "Members to erase, 1-based")->delimiter(',');

  CLI::App* transform = app.add_subcommand("transform", "Image under an invertible operator");
  add_common(transform);
  transform->add_option("--operator", o.operator_path, "Matrix document")->required()->check(CLI::ExistingFile);
  transform->add_option("--out", o.out_path, "Write the image document here");

  CLI::App* system = app.add_subcommand("system", "Checks on a fusion frame system");
  add_common(system);

  CLI::App* example = app.add_subcommand("example", "Emit a built-in example");
  example->add_option("--name", o.example_name, "7.1, 7.1-V, 7.2 or 7.3")->required();
  example->add_option("-n", o.n, "Dimension");
  example->add_option("--field", o.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  example->add_option("--out", o.out_path, "Write the document here");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_object("UsageError", e.what()).dump() << '\n';
    return 1;
  }

  try {
    if (*analyze) return detail::with_frame(o, [&](const auto& f) { return detail::analyze(f, o, out); });
    if (*redundancy) return detail::with_frame(o, [&](const auto& f) { return detail::redundancy(f, o, out); });
    if (*dual) return detail::with_frame(o, [&](const auto& f) { return detail::dual(f, o, out); });
    if (*verify) return detail::with_frame(o, [&](const auto& f) { return detail::verify_dual(f, o, out); });
    if (*erasure) return detail::with_frame(o, [&](const auto& f) { return detail::erasure(f, o, out); });
    if (*transform) return detail::with_frame(o, [&](const auto& f) { return detail::transform(f, o, out); });
    if (*system) return detail::with_frame(o, [&](const auto& f) { return detail::system(f, o, out); });
    if (*example) {
      const FrameDocument doc =
          emit_example(o.example_name, o.n, o.field == "real" ? Field::Real : Field::Complex);
      if (o.out_path.empty())
        out << to_json(doc).dump(2) << '\n';
      else
        write_json_file(o.out_path, to_json(doc));
      return 0;
    }
  } catch (const Error& e) {
    err << error_object(std::string(to_string(e.code())), e.detail(), e.member(), e.where()).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << error_object("InternalError", e.what()).dump() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ffk::cli
