#pragma once

// Pieces of the command-line tool that are worth testing on their own:
// the key-value report document, tamper-spec JSON, exit-code mapping.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "roimark/roimark.hpp"

namespace roimark::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitTampered = 1,
  kExitUsage = 2,
  kExitCapacityOrKey = 3,
  kExitIo = 4,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAuthentic:
      return kExitTampered;
    case ErrorCode::CapacityExceeded:
    case ErrorCode::KeyInvalid:
    case ErrorCode::InsufficientRoni:
    case ErrorCode::BadVersion:
      return kExitCapacityOrKey;
    case ErrorCode::FormatError:
    case ErrorCode::IoError:
    case ErrorCode::HeaderInvalid:
    case ErrorCode::CorruptStream:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

/// Ordered "key: value" document. Field order is insertion order, which the
/// commands keep fixed so reports diff cleanly.
class ReportDoc {
 public:
  explicit ReportDoc(std::string command) {
    add("report_version", "1");
    add("command", std::move(command));
  }

  ReportDoc& add(std::string key, std::string value) {
    fields_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  ReportDoc& add(std::string key, bool value) { return add(std::move(key), std::string(value ? "true" : "false")); }
  ReportDoc& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
  ReportDoc& add(std::string key, double value, int precision = 4) {
    if (std::isinf(value)) return add(std::move(key), std::string("inf"));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    return add(std::move(key), std::string(buf));
  }
  template <typename Int>
    requires std::is_integral_v<Int>
  ReportDoc& add(std::string key, Int value) {
    return add(std::move(key), std::to_string(value));
  }
  ReportDoc& add_list(std::string key, const std::vector<std::size_t>& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(values[i]);
    }
    return add(std::move(key), s + "]");
  }
  ReportDoc& add_quoted(std::string key, const std::string& text) {
    return add(std::move(key), nlohmann::json(text).dump());
  }

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

  std::string find(const std::string& key) const {
    for (const auto& [k, v] : fields_) {
      if (k == key) return v;
    }
    return {};
  }

  std::string render() const {
    std::string out;
    for (const auto& [k, v] : fields_) out += k + ": " + v + "\n";
    return out;
  }

  /// Parses a rendered document back into fields.
  static std::vector<std::pair<std::string, std::string>> parse(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto sep = line.find(": ");
      if (sep == std::string::npos) continue;
      out.emplace_back(line.substr(0, sep), line.substr(sep + 2));
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

inline std::string rect_text(const Rect& r) {
  return std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
         std::to_string(r.h);
}

inline Rect parse_rect(const std::string& text) {
  Rect r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d%c", &r.x, &r.y, &r.w, &r.h, &tail) != 4) {
    throw Error(ErrorCode::RoiOutOfBounds, "expected X,Y,W,H but got '" + text + "'");
  }
  return r;
}

inline void add_verify_fields(ReportDoc& doc, const VerifyReport& r) {
  const Rect roi{static_cast<int>(r.header.roi_x), static_cast<int>(r.header.roi_y),
                 static_cast<int>(r.header.roi_w), static_cast<int>(r.header.roi_h)};
  doc.add("authentic", r.authentic)
      .add("payload_state", r.payload_state == PayloadState::Ok ? "ok" : "corrupt")
      .add("recovery_caveat", r.recovery_caveat)
      .add("roi", rect_text(roi))
      .add("payload_len_bits", r.header.payload_len_bits)
      .add("epr_len_bytes", r.header.epr_len_bytes)
      .add("h1", r.h1 ? to_hex(*r.h1) : std::string("none"))
      .add("h2", to_hex(r.h2))
      .add("block_comparisons", r.block_comparisons)
      .add("tampered_count", r.tampered_blocks.size())
      .add_list("tampered_blocks", r.tampered_blocks);
  if (r.epr) {
    doc.add_quoted("epr", std::string(r.epr->begin(), r.epr->end()));
  } else {
    doc.add("epr", "unrecoverable");
  }
}

inline void add_embed_fields(ReportDoc& doc, const EmbedResult& r) {
  const Rect roi{static_cast<int>(r.header.roi_x), static_cast<int>(r.header.roi_y),
                 static_cast<int>(r.header.roi_w), static_cast<int>(r.header.roi_h)};
  doc.add("roi", rect_text(roi))
      .add("w_bits", r.stats.w_bits)
      .add("w_comp_bits", r.stats.w_comp_bits)
      .add("compression_ratio", r.stats.compression_ratio)
      .add("n_blocks", r.stats.n_blocks)
      .add("roni_blocks_used", r.stats.roni_blocks_used)
      .add("roni_blocks_available", r.stats.roni_blocks_available)
      .add("psnr_vs_original", r.stats.psnr_vs_original);
}

/// Tamper spec file:
///   {"mode": "constant" | "random" | "lsb", "value": 0, "seed": 1,
///    "regions": [{"x": 40, "y": 40, "w": 20, "h": 20}, ...]}
inline TamperSpec tamper_spec_from_json(const nlohmann::json& j) {
  TamperSpec spec;
  try {
    const std::string mode = j.value("mode", std::string("constant"));
    if (mode == "constant") {
      const int v = j.value("value", 0);
      if (v < 0 || v > 255) throw Error(ErrorCode::FormatError, "constant value outside 0..255");
      spec.mode = ConstantFill{static_cast<std::uint8_t>(v)};
    } else if (mode == "random") {
      spec.mode = RandomFill{j.value("seed", std::uint64_t{0})};
    } else if (mode == "lsb") {
      spec.mode = LsbFlip{};
    } else {
      throw Error(ErrorCode::FormatError, "unknown tamper mode '" + mode + "'");
    }
    for (const auto& r : j.at("regions")) {
      spec.regions.push_back({r.at("x").get<int>(), r.at("y").get<int>(), r.at("w").get<int>(),
                              r.at("h").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("tamper spec: ") + e.what());
  }
  return spec;
}

inline nlohmann::json tamper_spec_to_json(const TamperSpec& spec) {
  nlohmann::json j;
  if (const auto* c = std::get_if<ConstantFill>(&spec.mode)) {
    j["mode"] = "constant";
    j["value"] = c->value;
  } else if (const auto* r = std::get_if<RandomFill>(&spec.mode)) {
    j["mode"] = "random";
    j["seed"] = r->seed;
  } else {
    j["mode"] = "lsb";
  }
  j["regions"] = nlohmann::json::array();
  for (const Rect& r : spec.regions) {
    j["regions"].push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}});
  }
  return j;
}

inline TamperSpec load_tamper_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
  return tamper_spec_from_json(j);
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Deterministic ASCII patient record of exactly `bytes` bytes.
inline std::string synthetic_epr(std::size_t bytes, std::uint64_t seed) {
  static constexpr const char* kFields[] = {
      "PatientName=DOE^JANE;", "PatientID=", ";Modality=CT;", "StudyDate=2014",
      ";Referring=Dr SMITH;", "Notes=follow-up scan, no contrast;"};
  std::string s;
  std::uint64_t x = seed * 6364136223846793005ull + 1442695040888963407ull;
  while (s.size() < bytes) {
    x = x * 6364136223846793005ull + 1442695040888963407ull;
    s += kFields[(x >> 33) % 6];
    s += std::to_string((x >> 40) % 100000);
  }
  s.resize(bytes);
  return s;
}

}  // namespace roimark::cli
