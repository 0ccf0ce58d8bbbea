// selmer3: report generator for local orbit classification, Selmer ratios,
// twist-family scans and the Prym family.  Reports go to stdout as JSON
// (or CSV for scan tables); diagnostics go to stderr.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "selmer3/json_io.hpp"
#include "selmer3/presets.hpp"
#include "selmer3/selmer3.hpp"

using namespace selmer3;
using io::Json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kDomain = 3, kIncomplete = 4 };

/// A path on disk, or else the name of a shipped preset.
Json resolve_document(const std::string& ref) {
  if (std::filesystem::is_regular_file(ref)) return io::load_file(ref);
  return io::parse_text(std::string(presets::get(ref)), "preset " + ref);
}

Rational parse_d(const std::string& s) {
  Rational d = parse_rational(s);
  if (d == 0) throw DomainError("d must be nonzero");
  return d;
}

bool is_prym_document(const Json& j) { return j.is_object() && j.contains("a"); }

SelmerConfig selmer_config_of(const Json& j) {
  if (is_prym_document(j)) {
    PrymCurveConfig pc = io::prym_config_from_json(j);
    auto sols = solve_three_adic(pc.three_adic);
    if (sols.empty()) throw DomainError("3-adic constraints are unsatisfiable");
    return pc.selmer_config(sols.front());
  }
  return io::selmer_config_from_json(j);
}

Json classify_result(const Integer& p, const Rational& d) {
  Place pl = Place::finite(p);
  H1Dims dims = h1_dims(pl, d);
  auto vr = ValuedRational::at(d, p);
  Json classes = Json::array();
  for (const auto& c : classify_integral(p, d)) {
    Json e{{"label", c.label()}, {"kind", c.kind_tag()}, {"integral", c.integral}};
    e["representative"] = c.integral ? io::to_json(integral_representative(p, d, c)) : Json(nullptr);
    classes.push_back(e);
  }
  auto sq = classify_squares(d, pl);
  return {{"p", p.str()},
          {"d", io::rat(d)},
          {"valuation", vr.val},
          {"d_square", sq.d_is_square},
          {"minus3d_square", sq.minus3d_is_square},
          {"zeta3", zeta3_present(pl)},
          {"h1_dims", {{"total", dims.total}, {"unramified", dims.unramified}}},
          {"classes", classes}};
}

struct ScanInput {
  TwistFamily family;
  SelmerConfig config;
  ExponentSelector selector;
  std::string name;
};

ScanInput scan_input_of(const Json& j) {
  io::check_schema(j, "family");
  ScanInput in;
  in.name = j.value("name", "");
  in.family = io::family_from_json(j);
  if (j.contains("config")) in.config = selmer_config_of(j.at("config"));
  else if (j.contains("config_preset")) in.config = selmer_config_of(resolve_document(j.at("config_preset").get<std::string>()));
  else throw UsageError("family document needs \"config\" or \"config_preset\"");
  std::string track = j.value("track", "chain");
  if (track != "chain") {
    in.config.isogeny_index(track);
    in.selector.isogeny = track;
  }
  return in;
}

Json scan_result(const ScanInput& in, bool with_members) {
  TkPartition part = tk_partition(in.family, in.config, in.selector);
  Json cells = Json::array();
  for (const auto& [k, cell] : part.cells) {
    auto b = rank_density_bounds(k);
    Json c{{"k", k},
           {"members", cell.members.size()},
           {"density", cell.density ? io::rat(*cell.density) : Json(nullptr)},
           {"empirical", io::rat(cell.empirical)},
           {"average_selmer", io::rat(average_selmer_prediction(k))},
           {"avg_dim_bound", io::rat(b.avg_dim_bound)},
           {"exact_dim_density", io::rat(b.exact_dim_density)}};
    if (with_members) {
      Json ms = Json::array();
      for (const auto& m : cell.members) ms.push_back(m.str());
      c["member_list"] = ms;
    }
    cells.push_back(c);
  }
  EulerProductResult e = euler_product_average(in.family, in.config, in.selector);
  Json euler{{"average", e.average ? io::rat(*e.average) : Json(nullptr)},
             {"truncated", e.truncated},
             {"diverges", e.diverges}};
  if (!e.reason.empty()) euler["reason"] = e.reason;
  return {{"family", io::to_json(in.family)}, {"config", in.config.name}, {"track", in.selector.isogeny.value_or("chain")},
          {"total", part.total}, {"num_bad_places", part.num_bad}, {"densities_exact", part.densities_exact},
          {"cells", cells}, {"euler_product", euler}};
}

std::string scan_csv(const Json& r) {
  std::ostringstream out;
  out << "k,members,density,empirical,average_selmer,avg_dim_bound,exact_dim_density\n";
  for (const Json& c : r.at("cells")) {
    out << c.at("k").get<int>() << ',' << c.at("members").get<std::size_t>() << ','
        << (c.at("density").is_null() ? std::string() : c.at("density").get<std::string>()) << ','
        << c.at("empirical").get<std::string>() << ',' << c.at("average_selmer").get<std::string>() << ','
        << c.at("avg_dim_bound").get<std::string>() << ',' << c.at("exact_dim_density").get<std::string>() << '\n';
  }
  return out.str();
}

Json envelope(const std::string& command, const Json& input, Json result, bool timing, double ms) {
  Json e{{"command", command},
         {"config_digest", io::digest(input)},
         {"artifact_version", io::kArtifactVersion},
         {"result", std::move(result)}};
  if (timing) e["timing_ms"] = ms;
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selmer-ratio calculus for 3-isogenies in sextic twist families"};
  app.require_subcommand(1);
  bool timing = false;
  app.add_flag("--timing", timing, "Include wall-clock timing in the envelope");

  std::string p_s, d_s, config_ref, family_ref, preset_ref = "prym-a4", format = "json", height_s;
  bool members = false, no_rows = false;

  auto* classify = app.add_subcommand("classify", "Local orbit classification at a prime p > 3");
  classify->add_option("--p", p_s, "Prime p > 3")->required();
  classify->add_option("--d", d_s, "Nonzero rational d, e.g. 25 or -3/4")->required();

  auto* ratio = app.add_subcommand("ratio", "Local and global Selmer ratios for one twist");
  ratio->add_option("--config", config_ref, "Config file or preset name")->required();
  ratio->add_option("--d", d_s, "Nonzero rational d")->required();

  auto* scan = app.add_subcommand("scan", "T_k partition of a twist family");
  scan->add_option("--family", family_ref, "Family file or preset name")->required();
  scan->add_option("--height", height_s, "Height bound X (overrides the document)");
  scan->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  scan->add_flag("--members", members, "List the members of each cell");

  auto* prym = app.add_subcommand("prym", "Prym family report");
  prym->add_option("--preset", preset_ref, "Preset name or file");
  prym->add_option("--height", height_s, "Height bound X (overrides the preset)");
  prym->add_flag("--no-rows", no_rows, "Omit the per-twist rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count(); };
  try {
    if (classify->parsed()) {
      Integer p = parse_integer(p_s);
      if (p <= 3 || !is_prime(p)) throw DomainError("classify: p must be a prime greater than 3");
      Rational d = parse_d(d_s);
      Json input{{"p", p.str()}, {"d", io::rat(d)}};
      std::cout << envelope("classify", input, classify_result(p, d), timing, elapsed()).dump(2) << '\n';
    } else if (ratio->parsed()) {
      Json doc = resolve_document(config_ref);
      Rational d = parse_d(d_s);
      SelmerConfig cfg = selmer_config_of(doc);
      Json result = io::to_json(global_report(cfg, d));
      result["config"] = cfg.name;
      result["num_bad_places"] = num_bad_places(cfg);
      Json input{{"config", doc}, {"d", io::rat(d)}};
      std::cout << envelope("ratio", input, result, timing, elapsed()).dump(2) << '\n';
    } else if (scan->parsed()) {
      Json doc = resolve_document(family_ref);
      if (!height_s.empty()) doc["height_bound"] = parse_integer(height_s).str();
      ScanInput in = scan_input_of(doc);
      Json result = scan_result(in, members);
      if (format == "csv") std::cout << scan_csv(result);
      else std::cout << envelope("scan", doc, result, timing, elapsed()).dump(2) << '\n';
    } else if (prym->parsed()) {
      Json doc = resolve_document(preset_ref);
      PrymCurveConfig cfg = io::prym_config_from_json(doc);
      Integer X = height_s.empty() ? cfg.family.height_bound : parse_integer(height_s);
      Json result = io::to_json(family_report(cfg, X));
      if (no_rows) result.erase("rows");
      Json input{{"preset", doc}, {"height_bound", X.str()}};
      std::cout << envelope("prym", input, result, timing, elapsed()).dump(2) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IncompleteConfig& e) {
    std::cerr << "error: incomplete configuration: " << e.what() << '\n';
    return kIncomplete;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed document: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
