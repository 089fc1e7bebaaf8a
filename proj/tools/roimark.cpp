// roimark: ROI-aware fragile watermarking of 8-bit grayscale PGM images.
//
//   roimark embed   --in I --out O --roi X,Y,W,H --epr FILE --k1 KEY --k PRIME
//   roimark verify  --in I --k1 KEY --k PRIME [--report FILE]
//   roimark recover --in I --out O --k1 KEY --k PRIME [--report FILE]
//   roimark restore --in I --out O --k1 KEY --k PRIME
//   roimark tamper  --in I --out O --tamper-spec FILE (--roi X,Y,W,H | --k1 KEY)
//   roimark metrics --in I --ref R [--roi X,Y,W,H]
//   roimark report  (--in DIR | --synthetic N) [--roi ..] [--epr ..] --k1 KEY --k PRIME
//
// Exit codes: 0 ok/authentic, 1 tamper detected, 2 usage or configuration,
// 3 capacity or key, 4 I/O or format.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "roimark/roimark.hpp"

namespace fs = std::filesystem;
using namespace roimark;
using namespace roimark::cli;

namespace {

struct Options {
  std::string in;
  std::string out;
  std::string ref;
  std::string roi;
  std::string epr;
  std::string k1;
  std::uint64_t k = 0;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string tamper_spec;
  int synthetic = 0;
};

void emit(const ReportDoc& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << doc.render();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path);
  out << doc.render();
}

std::string epr_text(const Options& o) { return o.epr.empty() ? std::string() : read_text_file(o.epr); }

int cmd_embed(const Options& o) {
  const GrayImage image = pgm::load(o.in);
  const RoiRect roi = parse_rect(o.roi);
  validate_roi(image.width(), image.height(), roi);
  const EmbedResult r = embed(image, roi, epr_text(o), o.k1, o.k);
  pgm::save(o.out, r.watermarked);
  ReportDoc doc("embed");
  doc.add("input", o.in).add("output", o.out);
  add_embed_fields(doc, r);
  doc.add("mssim_vs_original", mssim(image, r.watermarked));
  emit(doc, o.report);
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const VerifyReport r = verify(pgm::load(o.in), o.k1, o.k);
  ReportDoc doc("verify");
  doc.add("input", o.in);
  add_verify_fields(doc, r);
  emit(doc, o.report);
  return r.authentic ? kExitOk : kExitTampered;
}

int cmd_recover(const Options& o) {
  const RecoverResult r = recover(pgm::load(o.in), o.k1, o.k);
  pgm::save(o.out, r.recovered.image);
  ReportDoc doc("recover");
  doc.add("input", o.in).add("output", o.out);
  add_verify_fields(doc, r.report);
  doc.add("recovered_count", r.recovered.recovered_blocks.size());
  emit(doc, o.report);
  return r.report.authentic ? kExitOk : kExitTampered;
}

int cmd_restore(const Options& o) {
  pgm::save(o.out, restore(pgm::load(o.in), o.k1, o.k));
  ReportDoc doc("restore");
  doc.add("input", o.in).add("output", o.out).add("authentic", true);
  emit(doc, o.report);
  return kExitOk;
}

int cmd_tamper(const Options& o) {
  const GrayImage image = pgm::load(o.in);
  RoiRect roi;
  if (!o.roi.empty()) {
    roi = parse_rect(o.roi);
  } else if (!o.k1.empty()) {
    const HeaderPayload h = extract_header(image, o.k1);
    roi = {static_cast<int>(h.roi_x), static_cast<int>(h.roi_y), static_cast<int>(h.roi_w),
           static_cast<int>(h.roi_h)};
  } else {
    throw Error(ErrorCode::RoiOutOfBounds, "tamper needs --roi or --k1 to locate the ROI");
  }
  TamperSpec spec = load_tamper_spec(o.tamper_spec);
  if (o.seed) {
    if (auto* r = std::get_if<RandomFill>(&spec.mode)) r->seed = *o.seed;
  }
  const TamperResult t = apply_tamper(image, spec, roi);
  pgm::save(o.out, t.image);
  ReportDoc doc("tamper");
  doc.add("input", o.in)
      .add("output", o.out)
      .add("roi", rect_text(roi))
      .add("spec", tamper_spec_to_json(spec).dump())
      .add("ground_truth_count", t.changed_blocks.size())
      .add_list("ground_truth_blocks", t.changed_blocks)
      .add("touched_count", t.touched_blocks.size())
      .add_list("touched_blocks", t.touched_blocks);
  emit(doc, o.report);
  return kExitOk;
}

int cmd_metrics(const Options& o) {
  const GrayImage a = pgm::load(o.ref);
  const GrayImage b = pgm::load(o.in);
  ReportDoc doc("metrics");
  doc.add("reference", o.ref).add("input", o.in).add("psnr_db", psnr(a, b)).add("mssim", mssim(a, b));
  if (!o.roi.empty()) doc.add("roi_psnr_db", psnr(a, b, parse_rect(o.roi)));
  emit(doc, o.report);
  return kExitOk;
}

RoiRect default_roi(const GrayImage& img) {
  const int w = (img.width() * 3 / 4) / 4 * 4;
  const int h = (img.height() * 3 / 4) / 4 * 4;
  return {(img.width() - w) / 2, (img.height() - h) / 2, w, h};
}

/// Three disjoint 12x12 random-fill regions inside the ROI.
TamperSpec default_tamper(const RoiRect& roi, std::uint64_t seed) {
  TamperSpec spec;
  spec.mode = RandomFill{seed};
  std::mt19937_64 rng(seed ^ 0x5EEDull);
  constexpr int kSide = 12;
  while (spec.regions.size() < 3) {
    const Rect r{roi.x + static_cast<int>(rng() % static_cast<std::uint64_t>(roi.w - kSide + 1)),
                 roi.y + static_cast<int>(rng() % static_cast<std::uint64_t>(roi.h - kSide + 1)),
                 kSide, kSide};
    const bool clear = std::none_of(spec.regions.begin(), spec.regions.end(),
                                    [&](const Rect& o) { return o.intersects(r); });
    if (clear) spec.regions.push_back(r);
  }
  return spec;
}

int cmd_report(const Options& o) {
  struct Item {
    std::string name;
    GrayImage image;
  };
  std::vector<Item> corpus;
  const std::uint64_t seed = o.seed.value_or(1);
  if (!o.in.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(o.in)) {
      if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) corpus.push_back({f.filename().string(), pgm::load(f)});
  } else {
    const int n = o.synthetic > 0 ? o.synthetic : 8;
    for (int i = 0; i < n; ++i) {
      PhantomOptions p;
      p.kind = static_cast<PhantomKind>(i % 4);
      p.seed = seed + static_cast<std::uint64_t>(i);
      corpus.push_back({std::string(to_string(p.kind)) + "-" + std::to_string(p.seed),
                        make_phantom(p)});
    }
  }
  if (corpus.empty()) throw Error(ErrorCode::IoError, "no .pgm images found in " + o.in);

  const std::string epr = o.epr.empty() ? synthetic_epr(512, seed) : read_text_file(o.epr);
  std::optional<TamperSpec> spec;
  if (!o.tamper_spec.empty()) spec = load_tamper_spec(o.tamper_spec);

  ReportDoc doc("report");
  doc.add("images", corpus.size()).add("epr_bytes", epr.size()).add("k", o.k);
  doc.add("columns",
          "image roi w_bits w_comp_bits n_blocks psnr mssim authentic_clean flagged ground_truth "
          "exact tampered_roi_psnr recovered_roi_psnr");
  double min_psnr = 1e9;
  double min_mssim = 1.0;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& item = corpus[i];
    const RoiRect roi = o.roi.empty() ? default_roi(item.image) : parse_rect(o.roi);
    const EmbedResult e = embed(item.image, roi, epr, o.k1, o.k);
    const VerifyReport clean = verify(e.watermarked, o.k1, o.k);
    const TamperSpec ts = spec ? *spec : default_tamper(roi, seed + i);
    const TamperResult t = apply_tamper(e.watermarked, ts, roi);
    const RecoverResult rec = recover(t.image, o.k1, o.k);
    const double p = psnr(item.image, e.watermarked);
    const double m = mssim(item.image, e.watermarked);
    const bool match = rec.report.tampered_blocks == t.changed_blocks;
    min_psnr = std::min(min_psnr, p);
    min_mssim = std::min(min_mssim, m);
    exact += match ? 1 : 0;

    char row[512];
    std::snprintf(row, sizeof row, "%s %dx%d %zu %zu %zu %.2f %.4f %s %zu %zu %s %.2f %.2f",
                  item.name.c_str(), roi.w, roi.h, e.stats.w_bits, e.stats.w_comp_bits,
                  e.stats.n_blocks, p, m, clean.authentic ? "true" : "false",
                  rec.report.tampered_blocks.size(), t.changed_blocks.size(),
                  match ? "true" : "false", psnr(item.image, t.image, roi),
                  psnr(item.image, rec.recovered.image, roi));
    doc.add("row." + std::to_string(i), std::string(row));
    if (!o.out.empty()) {
      fs::create_directories(o.out);
      pgm::save(fs::path(o.out) / (item.name + ".watermarked.pgm"), e.watermarked);
      pgm::save(fs::path(o.out) / (item.name + ".tampered.pgm"), t.image);
      pgm::save(fs::path(o.out) / (item.name + ".recovered.pgm"), rec.recovered.image);
    }
  }
  doc.add("summary.min_psnr", min_psnr).add("summary.min_mssim", min_mssim);
  doc.add("summary.exact_localization", std::to_string(exact) + "/" + std::to_string(corpus.size()));
  emit(doc, o.report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ROI-aware fragile watermarking for 8-bit grayscale PGM images"};
  app.require_subcommand(1);
  Options o;

  auto add_keys = [&](CLI::App* sub) {
    sub->add_option("--k1", o.k1, "Encryption key (text)")->required();
    sub->add_option("--k", o.k, "Prime block-mapping key")->required();
  };

  auto* embed_cmd = app.add_subcommand("embed", "Watermark an image");
  embed_cmd->add_option("--in", o.in)->required();
  embed_cmd->add_option("--out", o.out)->required();
  embed_cmd->add_option("--roi", o.roi, "X,Y,W,H")->required();
  embed_cmd->add_option("--epr", o.epr, "ASCII patient record file");
  embed_cmd->add_option("--report", o.report);
  add_keys(embed_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Authenticate and localize tampering");
  verify_cmd->add_option("--in", o.in)->required();
  verify_cmd->add_option("--report", o.report);
  add_keys(verify_cmd);

  auto* recover_cmd = app.add_subcommand("recover", "Verify and repair tampered ROI blocks");
  recover_cmd->add_option("--in", o.in)->required();
  recover_cmd->add_option("--out", o.out)->required();
  recover_cmd->add_option("--report", o.report);
  add_keys(recover_cmd);

  auto* restore_cmd = app.add_subcommand("restore", "Undo an authentic watermark");
  restore_cmd->add_option("--in", o.in)->required();
  restore_cmd->add_option("--out", o.out)->required();
  restore_cmd->add_option("--report", o.report);
  add_keys(restore_cmd);

  auto* tamper_cmd = app.add_subcommand("tamper", "Apply an attack with ground truth");
  tamper_cmd->add_option("--in", o.in)->required();
  tamper_cmd->add_option("--out", o.out)->required();
  tamper_cmd->add_option("--tamper-spec", o.tamper_spec)->required();
  tamper_cmd->add_option("--roi", o.roi);
  tamper_cmd->add_option("--k1", o.k1);
  tamper_cmd->add_option("--seed", o.seed);
  tamper_cmd->add_option("--report", o.report);

  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR and MSSIM between two images");
  metrics_cmd->add_option("--in", o.in)->required();
  metrics_cmd->add_option("--ref", o.ref)->required();
  metrics_cmd->add_option("--roi", o.roi);
  metrics_cmd->add_option("--report", o.report);

  auto* report_cmd = app.add_subcommand("report", "Embed, tamper, verify and recover a corpus");
  report_cmd->add_option("--in", o.in, "Directory of .pgm images");
  report_cmd->add_option("--synthetic", o.synthetic, "Number of synthetic phantoms");
  report_cmd->add_option("--out", o.out, "Directory for intermediate images");
  report_cmd->add_option("--roi", o.roi);
  report_cmd->add_option("--epr", o.epr);
  report_cmd->add_option("--seed", o.seed);
  report_cmd->add_option("--tamper-spec", o.tamper_spec);
  report_cmd->add_option("--report", o.report);
  add_keys(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*embed_cmd) return cmd_embed(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*recover_cmd) return cmd_recover(o);
    if (*restore_cmd) return cmd_restore(o);
    if (*tamper_cmd) return cmd_tamper(o);
    if (*metrics_cmd) return cmd_metrics(o);
    if (*report_cmd) return cmd_report(o);
  } catch (const Error& e) {
    std::cerr << "roimark: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "roimark: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
