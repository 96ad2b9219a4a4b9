// Command-line surface: channel ingestion, information measures, rate
// regions, error-exponent bounds, packing-lemma codebooks, exact decoder
// evaluation, and the worked-example figures.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqcode/channels.hpp"
#include "cqcode/emit.hpp"
#include "cqcode/exponents.hpp"
#include "cqcode/infomeasure.hpp"
#include "cqcode/regions.hpp"
#include "cqcode/schur.hpp"
#include "cqcode/serialization.hpp"
#include "cqcode/typeclasses.hpp"

namespace {

using namespace cqcode;

struct RunConfig {
  std::string out_dir = ".";
  Unit unit = Unit::bits;
  std::uint64_t seed = 0;
  double grid_step = 1.0 / 16;
  int t_card = 4;
  int threads = 1;

  OptGrid grid() const {
    OptGrid g;
    g.simplex_step = grid_step;
    g.t_card = t_card;
    g.threads = threads;
    return g;
  }
  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
  const char* unit_name() const { return unit == Unit::bits ? "bits" : "nats"; }
};

CompoundFamily load_family(const std::string& spec) {
  const std::string tilt_prefix = "builtin:example1-tilt:";
  if (spec.rfind(tilt_prefix, 0) == 0) {
    return build_quantum_tilt(build_example1(), std::stod(spec.substr(tilt_prefix.size())));
  }
  const std::string tilt2_prefix = "builtin:example2-tilt:";
  if (spec.rfind(tilt2_prefix, 0) == 0) {
    return build_quantum_tilt(build_example2(), std::stod(spec.substr(tilt2_prefix.size())));
  }
  if (spec == "builtin:example1") return build_example1();
  if (spec == "builtin:example2") return build_example2();
  if (spec == "builtin:swap-bsc01") {
    return build_channel_swap(classical_embed({{0.9, 0.1}, {0.1, 0.9}}));
  }
  if (spec.rfind("builtin:", 0) == 0) throw ParseError("unknown builtin family: " + spec);
  return family_from_json_text(read_text_file(spec));
}

AnyChannel load_channel(const std::string& spec) {
  if (spec == "builtin:bsc01") return classical_embed({{0.9, 0.1}, {0.1, 0.9}});
  if (spec == "builtin:noiseless-bit") return classical_embed({{1.0, 0.0}, {0.0, 1.0}});
  if (spec == "builtin:s2mac") return build_example1().mac_members[0];
  if (spec.rfind("builtin:", 0) == 0) throw ParseError("unknown builtin channel: " + spec);
  return channel_from_json_text(read_text_file(spec));
}

MarkovTriple default_triple_for(const AnyChannel& ch) {
  if (std::holds_alternative<CQChannel>(ch)) {
    const auto& cq = std::get<CQChannel>(ch);
    return MarkovTriple::from_ux(Dist({1.0}), {Dist::uniform(cq.input_size)});
  }
  const auto& mac = std::get<MACChannel>(ch);
  return MarkovTriple::product(Dist::uniform(mac.a_size), Dist::uniform(mac.b_size));
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

int cmd_info(const RunConfig& cfg, const std::string& channel_spec,
             const std::string& dist_path, const std::vector<double>& alphas) {
  const AnyChannel ch = load_channel(channel_spec);
  const MarkovTriple triple = dist_path.empty()
                                  ? default_triple_for(ch)
                                  : triple_from_json_text(read_text_file(dist_path));

  std::vector<std::pair<std::string, Measure>> rows;
  if (std::holds_alternative<CQChannel>(ch)) {
    const auto& cq = std::get<CQChannel>(ch);
    rows.emplace_back("I(X;Y)", holevo_value(ensemble_marginal(triple, cq)));
    rows.emplace_back("I(U;Y)", holevo_value(ensemble_common(triple, cq)));
    rows.emplace_back("I(X;Y|U)", cond_mi(triple, cq));
    for (double a : alphas) {
      rows.emplace_back("I_a(X;Y)", renyi_info(ensemble_marginal(triple, cq), a));
      rows.emplace_back("I_a(X;Y|U)", renyi_info(ensemble_private(triple, cq), a));
    }
  } else {
    const auto& mac = std::get<MACChannel>(ch);
    const std::vector<std::pair<std::string, MacInfo>> kinds = {
        {"I(A;Y|T)", MacInfo::a_given_t},   {"I(B;Y|AT)", MacInfo::b_given_at},
        {"I(A;Y|BT)", MacInfo::a_given_bt}, {"I(B;Y|T)", MacInfo::b_given_t},
        {"I(AB;Y|T)", MacInfo::ab_given_t},
    };
    for (const auto& [name, kind] : kinds) rows.emplace_back(name, mac_mi(mac, triple, kind));
    for (double a : alphas) {
      for (const auto& [name, kind] : kinds) {
        rows.emplace_back("I_a" + name.substr(1), mac_renyi_mi(mac, triple, kind, a));
      }
    }
  }

  std::string out = "measure,alpha,value,unit\n";
  const std::size_t holevo_rows = std::holds_alternative<CQChannel>(ch) ? 3 : 5;
  const std::size_t per_alpha = std::holds_alternative<CQChannel>(ch) ? 2 : 5;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double alpha = i < holevo_rows ? 1.0 : alphas[(i - holevo_rows) / per_alpha];
    out += rows[i].first + "," + format_double(alpha) + "," +
           format_double(rows[i].second.in(cfg.unit)) + "," + cfg.unit_name() + "\n";
  }
  write_text_file(cfg.path("info.csv"), out);
  std::cout << out;
  return 0;
}

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

int cmd_region(const RunConfig& cfg, const std::string& family_spec, const std::string& setting) {
  const CompoundFamily fam = load_family(family_spec);
  Region2D region;
  if (setting == "bcd") {
    if (fam.kind != FamilyKind::bcd || fam.bcd_members.size() != 1) {
      throw DomainError("region: setting bcd needs a single BCD pair");
    }
    region = region_bcd(fam.bcd_members[0], cfg.grid());
  } else if (setting == "compound-bcd") {
    region = region_compound_bcd(fam, cfg.grid());
  } else if (setting == "mac") {
    if (fam.kind != FamilyKind::mac || fam.mac_members.size() != 1) {
      throw DomainError("region: setting mac needs a single MAC channel");
    }
    region = region_mac(fam.mac_members[0], cfg.grid());
  } else if (setting == "compound-mac") {
    region = region_compound_mac(fam, cfg.grid());
  } else if (setting == "corner-union") {
    region = region_corner_union(fam, cfg.grid());
  } else {
    throw DomainError("region: unknown setting " + setting);
  }
  if (cfg.unit == Unit::nats) {
    for (auto& v : region.vertices) {
      v[0] *= 0.6931471805599453;
      v[1] *= 0.6931471805599453;
    }
    for (auto& h : region.halfplanes) h.c *= 0.6931471805599453;
    region.unit = Unit::nats;
  }
  const Csv csv = region_csv(region);
  write_text_file(cfg.path("region.csv"), csv.to_string());
  SvgPolygon poly{setting, "#c0392b", region.vertices};
  write_text_file(cfg.path("region.svg"),
                  svg_regions({poly}, std::string("R_A [") + cfg.unit_name() + "]",
                              std::string("R_B [") + cfg.unit_name() + "]"));
  std::cout << csv.to_string();
  return 0;
}

// ---------------------------------------------------------------------------
// exponent
// ---------------------------------------------------------------------------

int cmd_exponent(const RunConfig& cfg, const std::string& channel_spec,
                 const std::string& dist_path, double ra, double rb, double sa, double sb,
                 const std::string& variant) {
  const double to_nats = cfg.unit == Unit::bits ? 0.6931471805599453 : 1.0;
  const RateSpec spec(ra * to_nats, rb * to_nats, sa * to_nats, sb * to_nats);

  std::vector<std::pair<std::string, ExponentReport>> reports;
  if (variant == "bcd-y" || variant == "bcd-z" || variant == "superposition-alt") {
    const std::string text = read_text_file(channel_spec);
    const CompoundFamily fam = family_from_json_text(text);
    if (fam.kind != FamilyKind::bcd || fam.bcd_members.size() != 1) {
      throw DomainError("exponent: variant needs a single BCD pair file");
    }
    const BCDPair& pair = fam.bcd_members[0];
    const MarkovTriple triple = dist_path.empty()
                                    ? MarkovTriple::from_ux(Dist({1.0}),
                                                            {Dist::uniform(pair.input_size())})
                                    : triple_from_json_text(read_text_file(dist_path));
    if (variant == "bcd-y") reports.emplace_back("receiver_y", exp_bcd_y(pair, triple, spec));
    if (variant == "bcd-z") reports.emplace_back("receiver_z", exp_bcd_z(pair, triple, spec));
    if (variant == "superposition-alt") {
      reports.emplace_back("receiver_y_alt", exp_superposition_alt(pair, triple, spec));
    }
  } else {
    const AnyChannel ch = load_channel(channel_spec);
    if (!std::holds_alternative<MACChannel>(ch)) {
      throw DomainError("exponent: variant needs a MAC channel");
    }
    const MACChannel& mac = std::get<MACChannel>(ch);
    const MarkovTriple triple = dist_path.empty()
                                    ? default_triple_for(ch)
                                    : triple_from_json_text(read_text_file(dist_path));
    if (variant == "mac-joint") {
      reports.emplace_back("joint", exp_mac_joint(mac, triple, spec));
    } else if (variant == "mac-separate") {
      auto [a, b] = exp_mac_separate(mac, triple, spec);
      reports.emplace_back("sender_a", std::move(a));
      reports.emplace_back("sender_b", std::move(b));
    } else if (variant == "mac-joint-general") {
      reports.emplace_back("joint_general", exp_mac_joint_general(mac, triple, spec));
    } else {
      throw DomainError("exponent: unknown variant " + variant);
    }
  }

  const double from_nats = cfg.unit == Unit::bits ? 1.0 / 0.6931471805599453 : 1.0;
  std::string out = "report,term,value,maximizing_s,is_slack,unit\n";
  for (const auto& [name, rep] : reports) {
    out += name + ",exponent," + format_double(rep.value * from_nats) + "," +
           format_double(rep.maximizing_s) + ",0," + cfg.unit_name() + "\n";
    for (const auto& t : rep.term_breakdown) {
      out += name + "," + t.name + "," + format_double(t.value * from_nats) + "," +
             format_double(t.maximizing_s) + "," + (t.is_slack ? "1" : "0") + "," +
             cfg.unit_name() + "\n";
    }
  }
  write_text_file(cfg.path("exponent.csv"), out);
  std::cout << out;
  return 0;
}

// ---------------------------------------------------------------------------
// pack / decode
// ---------------------------------------------------------------------------

int cmd_pack(const RunConfig& cfg, const std::string& config_path) {
  const nlohmann::json j = nlohmann::json::parse(read_text_file(config_path));
  const std::string setting = j.value("setting", "");
  const int n = j.value("n", 0);
  const double slack = j.value("slack", 1.0);
  PackedCode code;
  if (setting == "single") {
    TypeVec type(n, j.at("counts").get<std::vector<int>>());
    code = pack_single(n, type, j.value("rate", 0.0), slack, cfg.seed);
  } else if (setting == "superposition") {
    JointTypeUX joint(n, j.at("joint_counts").get<std::vector<std::vector<int>>>());
    code = pack_superposition(n, joint, j.value("rate_u", 0.0), j.value("rate_x", 0.0), slack,
                              cfg.seed);
  } else if (setting == "mac") {
    MacTypeSpec spec;
    spec.t_counts = j.at("t_counts").get<std::vector<int>>();
    spec.a_counts = j.at("a_counts").get<std::vector<std::vector<int>>>();
    spec.b_counts = j.at("b_counts").get<std::vector<std::vector<int>>>();
    code = pack_mac(n, spec, j.value("rate_a", 0.0), j.value("rate_b", 0.0), slack, cfg.seed);
  } else {
    throw ParseError("pack: unknown setting in config");
  }
  const std::string text = packed_code_to_json_text(code);
  write_text_file(cfg.path("packed_code.json"), text);
  std::cout << text << "\n";
  return 0;
}

int cmd_decode(const RunConfig& cfg, const std::string& config_path) {
  const nlohmann::json j = nlohmann::json::parse(read_text_file(config_path));
  const PackedCode code = packed_code_from_json_text(read_text_file(j.at("code").get<std::string>()));
  const double slack_a = j.value("slack_a", 0.0);
  const double slack_b = j.value("slack_b", 0.0);
  const std::string mode = j.value("mode", "joint");

  std::string out = "receiver,epsilon\n";
  if (mode == "bcd") {
    const CompoundFamily fam = load_family(j.at("channel").get<std::string>());
    if (fam.kind != FamilyKind::bcd || fam.bcd_members.size() != 1) {
      throw DomainError("decode: bcd mode needs a single BCD pair");
    }
    const BcdDecoders dec = build_bcd_decoders(fam.bcd_members[0], code, slack_a, slack_b);
    const BcdErrors errs = bcd_error_probability(fam.bcd_members[0], code, dec);
    out += "y," + format_double(errs.eps_y) + "\n";
    out += "z," + format_double(errs.eps_z) + "\n";
  } else {
    const AnyChannel ch = load_channel(j.at("channel").get<std::string>());
    if (!std::holds_alternative<MACChannel>(ch)) {
      throw DomainError("decode: mac modes need a MAC channel");
    }
    const MACChannel& mac = std::get<MACChannel>(ch);
    if (mode == "joint" || mode == "alt") {
      const MacDecoders dec = build_mac_decoders(
          mac, code, slack_a, slack_b,
          mode == "joint" ? MacDecodeMode::joint : MacDecodeMode::alt);
      out += mode + "," + format_double(mac_error_probability(mac, code, *dec.joint)) + "\n";
    } else if (mode == "separate") {
      const MacDecoders dec =
          build_mac_decoders(mac, code, slack_a, slack_b, MacDecodeMode::separate);
      const SeparateErrors errs = mac_error_probability_separate(mac, code, *dec.a, *dec.b);
      out += "a," + format_double(errs.eps_a) + "\n";
      out += "b," + format_double(errs.eps_b) + "\n";
      const DecoderPOVM joint = convert_separate_to_joint(*dec.a, *dec.b);
      out += "converted_joint," + format_double(mac_error_probability(mac, code, joint)) + "\n";
    } else {
      throw ParseError("decode: unknown mode " + mode);
    }
  }
  write_text_file(cfg.path("decode.csv"), out);
  std::cout << out;
  return 0;
}

// ---------------------------------------------------------------------------
// paperfig
// ---------------------------------------------------------------------------

int cmd_paperfig(const RunConfig& cfg, const std::string& id) {
  if (id == "FF2") {
    const auto curves = example1_curves(100);
    Csv csv;
    csv.header = {"rate_bits", "product_inputs", "time_sharing"};
    SvgCurve lower{"product inputs", "#2980b9", {}}, upper{"time sharing", "#c0392b", {}};
    for (const auto& p : curves) {
      csv.rows.push_back({p.rate, p.hi1, p.hi2});
      lower.points.push_back({p.rate, p.hi1});
      upper.points.push_back({p.rate, p.hi2});
    }
    write_text_file(cfg.path("FF2.csv"), csv.to_string());
    write_text_file(cfg.path("FF2.svg"),
                    svg_plot({upper, lower}, "R_B [bits]", "common rate [bits]"));
  } else if (id == "FF3") {
    // slope scan of the product-input curve: (f1(R) - f1(0)) / R increases
    const double p0 = example1_p0();
    Csv csv;
    csv.header = {"rate_bits", "slope"};
    SvgCurve curve{"(f1(R)-f1(0))/R", "#27ae60", {}};
    for (int i = 1; i <= 100; ++i) {
      const double rate = 0.5 * i / 100.0;
      double lo = 0.0, hi = 0.5;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (binary_entropy_bits(mid * p0 + (1 - mid) * (1 - p0)) - 0.5 < rate) lo = mid;
        else hi = mid;
      }
      const double f1 = 1.0 - binary_entropy_bits(0.5 * (lo + hi));
      const double slope = (f1 - 1.0) / rate;
      csv.rows.push_back({rate, slope});
      curve.points.push_back({rate, slope + 2.0});  // shift into view
    }
    write_text_file(cfg.path("FF3.csv"), csv.to_string());
    write_text_file(cfg.path("FF3.svg"), svg_plot({curve}, "R_B [bits]", "slope + 2"));
  } else if (id == "FF4") {
    const auto out = example2_curves(100);
    Csv csv;
    csv.header = {"rate_bits", "product_inputs", "time_sharing_bound"};
    SvgCurve lower{"product inputs", "#2980b9", {}}, upper{"time sharing", "#c0392b", {}};
    for (const auto& p : out.curve) {
      csv.rows.push_back({p.rate, p.lgh, p.ll2p});
      lower.points.push_back({p.rate, p.lgh});
      upper.points.push_back({p.rate, p.ll2p});
    }
    write_text_file(cfg.path("FF4.csv"), csv.to_string());
    write_text_file(cfg.path("FF4.svg"),
                    svg_plot({upper, lower}, "R_B [bits]", "common rate [bits]"));
  } else if (id == "PO1") {
    const auto out = example2_curves(100);
    Csv csv;
    csv.header = {"p", "max_min_value_bits", "argmax_q"};
    SvgCurve curve{"max_q min(.,.)", "#8e44ad", {}};
    for (const auto& s : out.lm3_scan) {
      csv.rows.push_back({s.p, s.value, s.argmax_q});
      curve.points.push_back({s.p, std::max(s.value, 0.0)});
    }
    write_text_file(cfg.path("PO1.csv"), csv.to_string());
    write_text_file(cfg.path("PO1.svg"), svg_plot({curve}, "p", "value [bits]"));
  } else if (id == "Fregion") {
    const CompoundFamily fam = build_example1();
    OptGrid grid = cfg.grid();
    grid.t_card = std::max(grid.t_card, 2);
    const Region2D full = region_compound_mac(fam, grid);
    const Region2D corners = region_corner_union(fam, grid);
    Csv csv;
    csv.header = {"region", "r_a_bits", "r_b_bits"};
    for (const auto& v : full.vertices) csv.rows.push_back({0.0, v[0], v[1]});
    for (const auto& v : corners.vertices) csv.rows.push_back({1.0, v[0], v[1]});
    write_text_file(cfg.path("Fregion.csv"), csv.to_string());
    write_text_file(cfg.path("Fregion.svg"),
                    svg_regions({{"capacity region", "#c0392b", full.vertices},
                                 {"corner-point union", "#2980b9", corners.vertices}},
                                "R_A [bits]", "R_B [bits]"));
  } else {
    throw DomainError("paperfig: unknown figure id " + id);
  }
  std::cout << "wrote " << id << ".csv and " << id << ".svg under " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical-quantum broadcast/MAC coding toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string unit_name = "bits";
  app.add_option("--unit", unit_name, "bits or nats")->check(CLI::IsMember({"bits", "nats"}));
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--grid-step", cfg.grid_step, "simplex grid step");
  app.add_option("--t-card", cfg.t_card, "time-sharing cardinality cap");
  app.add_option("--out", cfg.out_dir, "output directory");
  app.add_option("--threads", cfg.threads, "worker threads (default 1, bit-reproducible)");

  std::string channel_spec, dist_path, family_spec, setting = "compound-mac";
  std::vector<double> alphas;
  auto* info = app.add_subcommand("info", "information measures of a channel");
  info->add_option("--channel", channel_spec, "channel JSON or builtin:...")->required();
  info->add_option("--dist", dist_path, "distribution JSON");
  info->add_option("--alpha", alphas, "Renyi orders");

  auto* region = app.add_subcommand("region", "rate-region computation");
  region->add_option("--family", family_spec, "family JSON or builtin:...")->required();
  region->add_option("--setting", setting,
                     "bcd|compound-bcd|mac|compound-mac|corner-union");

  double ra = 0.0, rb = 0.0, sa = 0.0, sb = 0.0;
  std::string variant = "mac-joint";
  auto* exponent = app.add_subcommand("exponent", "error-exponent bounds");
  exponent->add_option("--channel", channel_spec, "channel/pair JSON or builtin:...")->required();
  exponent->add_option("--dist", dist_path, "distribution JSON");
  exponent->add_option("--ra", ra, "common/sender-A rate");
  exponent->add_option("--rb", rb, "private/sender-B rate");
  exponent->add_option("--sa", sa, "slack r_A");
  exponent->add_option("--sb", sb, "slack r_B");
  exponent->add_option("--variant", variant,
                       "bcd-y|bcd-z|mac-joint|mac-separate|mac-joint-general|superposition-alt");

  std::string config_path;
  auto* pack = app.add_subcommand("pack", "construct a packing-lemma codebook");
  pack->add_option("--config", config_path, "pack config JSON")->required();

  auto* decode = app.add_subcommand("decode", "exact decoder evaluation");
  decode->add_option("--config", config_path, "decode config JSON")->required();

  std::string fig_id;
  auto* paperfig = app.add_subcommand("paperfig", "worked-example figures");
  paperfig->add_option("--id", fig_id, "FF2|FF3|FF4|PO1|Fregion")->required();

  for (auto* sc : {info, region, exponent, pack, decode, paperfig}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.unit = unit_name == "nats" ? Unit::nats : Unit::bits;

  try {
    std::filesystem::create_directories(cfg.out_dir);
    if (*info) return cmd_info(cfg, channel_spec, dist_path, alphas);
    if (*region) return cmd_region(cfg, family_spec, setting);
    if (*exponent) return cmd_exponent(cfg, channel_spec, dist_path, ra, rb, sa, sb, variant);
    if (*pack) return cmd_pack(cfg, config_path);
    if (*decode) return cmd_decode(cfg, config_path);
    if (*paperfig) return cmd_paperfig(cfg, fig_id);
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const PackingFailure& e) {
    std::cerr << "packing failure: " << e.what() << " (worst " << e.inequality << " ratio "
              << e.worst_ratio << ")\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
