// Copyright 2026 The forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "forge/asciiart.hpp"
#include "forge/config.hpp"
#include "forge/error.hpp"
#include "forge/lineio.hpp"
#include "forge/placeholder.hpp"
#include "forge/qefilter.hpp"
#include "forge/token.hpp"
#include "forge/tokenize.hpp"

namespace forge {

enum class Backend { kIdentity, kEmojiDrop, kExternalFiles };

inline Backend parse_backend(const std::string& name) {
  if (name == "identity") return Backend::kIdentity;
  if (name == "emoji-drop") return Backend::kEmojiDrop;
  if (name == "external") return Backend::kExternalFiles;
  throw UsageError("unknown backend '" + name +
                   "' (expected identity, emoji-drop or external)");
}

struct PipelineConfig {
  std::string input;
  std::string workdir;
  bool split = true;
  bool lenfilter = true;
  std::size_t max_len = 80;
  bool aafilter = true;
  double aa_threshold = 6.0;
  bool aa_sample_stddev = false;
  bool placeholder = true;
  Backend backend = Backend::kIdentity;
  std::string backend_file;  // external backend: its output
  bool qefilter = false;
  double multiplier = 2.0;
  std::string src_lm_path;
  std::string tgt_lm_path;
  std::string align_model_path;

  static PipelineConfig from_config(const Config& cfg) {
    static const std::set<std::string> known = {
        "input",        "workdir",      "split",
        "lenfilter",    "max_len",      "aafilter",
        "aa_threshold", "aa_sample_stddev", "placeholder",
        "backend",      "backend_file", "qefilter",
        "multiplier",   "src_lm",       "tgt_lm",
        "align_model"};
    for (const auto& [key, value] : cfg.values()) {
      if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
    }
    PipelineConfig pc;
    pc.input = cfg.get("input");
    pc.workdir = cfg.get("workdir", "forge-out");
    pc.split = cfg.get_bool("split", true);
    pc.lenfilter = cfg.get_bool("lenfilter", true);
    pc.max_len = static_cast<std::size_t>(cfg.get_long("max_len", 80));
    pc.aafilter = cfg.get_bool("aafilter", true);
    pc.aa_threshold = cfg.get_double("aa_threshold", 6.0);
    pc.aa_sample_stddev = cfg.get_bool("aa_sample_stddev", false);
    pc.placeholder = cfg.get_bool("placeholder", true);
    pc.backend = parse_backend(cfg.get("backend", "identity"));
    pc.backend_file = cfg.get("backend_file");
    pc.qefilter = cfg.get_bool("qefilter", false);
    pc.multiplier = cfg.get_double("multiplier", 2.0);
    pc.src_lm_path = cfg.get("src_lm");
    pc.tgt_lm_path = cfg.get("tgt_lm");
    pc.align_model_path = cfg.get("align_model");
    if (pc.input.empty()) throw UsageError("config: 'input' is required");
    if (pc.max_len < 1) throw UsageError("config: max_len must be >= 1");
    if (pc.backend == Backend::kExternalFiles && pc.backend_file.empty()) {
      throw UsageError("config: backend=external requires backend_file");
    }
    if (pc.qefilter && (pc.src_lm_path.empty() || pc.tgt_lm_path.empty() ||
                        pc.align_model_path.empty())) {
      throw UsageError(
          "config: qefilter=on requires src_lm, tgt_lm and align_model");
    }
    return pc;
  }
};

struct StageCount {
  std::string name;
  std::size_t in = 0;
  std::size_t out = 0;
  std::string note;     // e.g. "discarded=2"
  double wall_ms = 0;   // reported on stderr only, never in output files
};

struct RunReport {
  std::vector<StageCount> stages;
  std::size_t ph_deleted_extra = 0;
  std::size_t ph_appended_missing = 0;
  std::size_t ph_lines_repaired = 0;

  // Consecutive pipeline stages must agree on the line counts they hand
  // over: stage[i].out == stage[i+1].in.
  bool telescopes() const {
    for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
      if (stages[i].out != stages[i + 1].in) return false;
    }
    return true;
  }

  // Deterministic serialization: counts only, no timings.
  void write(std::ostream& out) const {
    out << "#runreport v1\n";
    out << "stage\tin\tout\tnote\n";
    for (const auto& s : stages) {
      out << s.name << '\t' << s.in << '\t' << s.out << '\t' << s.note << '\n';
    }
    out << "placeholder_deleted_extra\t" << ph_deleted_extra << '\n';
    out << "placeholder_appended_missing\t" << ph_appended_missing << '\n';
    out << "placeholder_lines_repaired\t" << ph_lines_repaired << '\n';
  }
};

namespace detail {

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Monolingual cleaning: split -> tokenize -> length filter -> ascii-art
// filter.  Sentence splitting runs before the per-sentence filters so that
// the frequency sigma is computed on single sentences.
inline std::vector<TokenSeq> clean_mono(const std::vector<std::string>& lines,
                                        const PipelineConfig& cfg,
                                        RunReport& report) {
  detail::StageTimer split_timer;
  std::vector<std::string> sentences;
  if (cfg.split) {
    for (const auto& line : lines) {
      for (auto& sent : split_sentences(line)) sentences.push_back(std::move(sent));
    }
  } else {
    sentences = lines;
  }
  report.stages.push_back({"split", lines.size(), sentences.size(),
                           cfg.split ? "" : "disabled",
                           split_timer.elapsed_ms()});

  detail::StageTimer tok_timer;
  std::vector<TokenSeq> tokenized;
  tokenized.reserve(sentences.size());
  for (const auto& sent : sentences) tokenized.push_back(tokenize_basic(sent));
  report.stages.push_back({"tokenize", sentences.size(), tokenized.size(), "",
                           tok_timer.elapsed_ms()});

  detail::StageTimer len_timer;
  std::vector<TokenSeq> len_kept;
  if (cfg.lenfilter) {
    for (auto& sent : tokenized) {
      if (keep_by_length(sent, cfg.max_len)) len_kept.push_back(std::move(sent));
    }
  } else {
    len_kept = std::move(tokenized);
  }
  const std::size_t len_in =
      report.stages.back().out;  // tokenize out == lenfilter in
  report.stages.push_back(
      {"lenfilter", len_in, len_kept.size(),
       cfg.lenfilter ? "discarded=" + std::to_string(len_in - len_kept.size())
                     : "disabled",
       len_timer.elapsed_ms()});

  detail::StageTimer aa_timer;
  std::vector<TokenSeq> aa_kept;
  std::string aa_note = "disabled";
  if (cfg.aafilter) {
    auto [kept, aa_report] =
        filter_ascii_art(len_kept, cfg.aa_threshold, cfg.aa_sample_stddev);
    aa_kept = std::move(kept);
    aa_note = "discarded=" + std::to_string(aa_report.discarded);
  } else {
    aa_kept = std::move(len_kept);
  }
  report.stages.push_back({"aafilter", report.stages.back().out, aa_kept.size(),
                           aa_note, aa_timer.elapsed_ms()});
  return aa_kept;
}

// Placeholderization of a cleaned corpus: template sentences plus the
// sidecar records the restore step will consume.
inline std::pair<std::vector<TokenSeq>, std::vector<std::vector<Special>>>
backtranslate_prep(const std::vector<TokenSeq>& cleaned,
                   const PipelineConfig& cfg, RunReport& report) {
  detail::StageTimer timer;
  std::vector<TokenSeq> templates;
  std::vector<std::vector<Special>> sidecar;
  templates.reserve(cleaned.size());
  sidecar.reserve(cleaned.size());
  for (const auto& sent : cleaned) {
    if (cfg.placeholder) {
      auto rec = placeholderize(sent);
      templates.push_back(std::move(rec.tmpl));
      sidecar.push_back(std::move(rec.specials));
    } else {
      templates.push_back(sent);
      sidecar.emplace_back();
    }
  }
  report.stages.push_back({"placeholder", cleaned.size(), templates.size(),
                           cfg.placeholder ? "" : "disabled",
                           timer.elapsed_ms()});
  return {std::move(templates), std::move(sidecar)};
}

// The mock backends and the external file contract.  A backend reads the
// template file and yields a line-aligned translation, preserving <PH>
// tokens where possible.  The emoji-drop mock deletes <PH> tokens, emojis,
// emoticons and leading quotes, imitating a model that loses them.
inline std::vector<TokenSeq> run_backend(const std::vector<TokenSeq>& templates,
                                         const PipelineConfig& cfg,
                                         RunReport& report) {
  detail::StageTimer timer;
  std::vector<TokenSeq> translated;
  switch (cfg.backend) {
    case Backend::kIdentity:
      translated = templates;
      break;
    case Backend::kEmojiDrop: {
      translated.reserve(templates.size());
      for (const auto& sent : templates) {
        std::vector<bool> covered(sent.size(), false);
        for (const auto& sp : detect_specials(sent)) {
          std::size_t width = 1;
          for (char c : sp.surface) width += (c == ' ') ? 1 : 0;
          for (std::size_t k = 0; k < width; ++k) covered[sp.position + k] = true;
        }
        TokenSeq out;
        out.lang = sent.lang;
        for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
          if (!covered[i] && sent.tokens[i] != kPlaceholderToken) {
            out.tokens.push_back(sent.tokens[i]);
          }
        }
        translated.push_back(std::move(out));
      }
      break;
    }
    case Backend::kExternalFiles: {
      if (!std::filesystem::exists(cfg.backend_file)) {
        throw DataError("external backend output not found: expected file " +
                        cfg.backend_file);
      }
      const auto lines = read_lines(cfg.backend_file);
      if (lines.size() != templates.size()) {
        throw DataError("external backend output has " +
                        std::to_string(lines.size()) + " lines, expected " +
                        std::to_string(templates.size()));
      }
      translated.reserve(lines.size());
      for (const auto& line : lines) translated.push_back(from_pretokenized(line));
      break;
    }
  }
  report.stages.push_back({"translate", templates.size(), translated.size(), "",
                           timer.elapsed_ms()});
  return translated;
}

inline std::vector<TokenSeq> restore_all(
    const std::vector<TokenSeq>& translated,
    const std::vector<std::vector<Special>>& sidecar, RunReport& report) {
  if (translated.size() != sidecar.size()) {
    throw DataError("restore: sidecar has " + std::to_string(sidecar.size()) +
                    " records for " + std::to_string(translated.size()) +
                    " lines");
  }
  detail::StageTimer timer;
  std::vector<TokenSeq> restored;
  restored.reserve(translated.size());
  for (std::size_t i = 0; i < translated.size(); ++i) {
    auto [sent, stats] = restore(translated[i], sidecar[i]);
    report.ph_deleted_extra += stats.deleted_extra;
    report.ph_appended_missing += stats.appended_missing;
    if (stats.repaired()) ++report.ph_lines_repaired;
    restored.push_back(std::move(sent));
  }
  report.stages.push_back({"restore", translated.size(), restored.size(), "",
                           timer.elapsed_ms()});
  return restored;
}

struct SyntheticResult {
  std::vector<ScoredPair> scored;  // all pairs, annotated
  std::vector<ScoredPair> kept;
  FilterReport filter_report;
};

// Figure-one step three: score the synthetic pairs and drop the low tail.
inline SyntheticResult build_synthetic(const std::vector<TokenSeq>& src_side,
                                       const std::vector<TokenSeq>& tgt_side,
                                       const NgramModel& src_lm,
                                       const NgramModel& tgt_lm,
                                       const AlignModel& am,
                                       const PipelineConfig& cfg,
                                       RunReport& report) {
  if (src_side.size() != tgt_side.size()) {
    throw DataError("synthetic corpus sides are misaligned: " +
                    std::to_string(src_side.size()) + " vs " +
                    std::to_string(tgt_side.size()));
  }
  detail::StageTimer timer;
  std::vector<std::pair<TokenSeq, TokenSeq>> pairs;
  pairs.reserve(src_side.size());
  for (std::size_t i = 0; i < src_side.size(); ++i) {
    pairs.emplace_back(src_side[i], tgt_side[i]);
  }
  SyntheticResult result;
  result.scored = score_pairs(src_lm, tgt_lm, am, pairs);
  auto [kept, freport] = zscore_filter(result.scored, cfg.multiplier);
  result.kept = std::move(kept);
  result.filter_report = freport;
  report.stages.push_back({"qefilter", pairs.size(), result.kept.size(),
                           "rejected_s_lm=" + std::to_string(freport.rejected_s_lm) +
                               " rejected_t_lm=" + std::to_string(freport.rejected_t_lm) +
                               " rejected_a=" + std::to_string(freport.rejected_a),
                           timer.elapsed_ms()});
  return result;
}

// Whole back-translation workflow, file in, files out.  Every output is
// deterministic for a fixed config and input; timings never reach the
// output files.
inline RunReport run_pipeline(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  if (!fs::exists(cfg.input)) {
    throw DataError("input file does not exist: " + cfg.input);
  }
  if (cfg.qefilter) {
    for (const auto* path :
         {&cfg.src_lm_path, &cfg.tgt_lm_path, &cfg.align_model_path}) {
      if (!fs::exists(*path)) {
        throw DataError("model file does not exist: " + *path);
      }
    }
  }
  const auto lines = read_lines(cfg.input);
  fs::create_directories(cfg.workdir);
  const fs::path out(cfg.workdir);
  auto write_seqs = [](const fs::path& path, const std::vector<TokenSeq>& seqs) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open output file: " + path.string());
    for (const auto& s : seqs) f << s.join() << '\n';
  };

  RunReport report;
  const auto cleaned = clean_mono(lines, cfg, report);
  write_seqs(out / "cleaned.txt", cleaned);

  auto [templates, sidecar] = backtranslate_prep(cleaned, cfg, report);
  if (cfg.placeholder) {
    write_seqs(out / "template.txt", templates);
    write_sidecar((out / "sidecar.tsv").string(), sidecar);
  }

  const auto translated = run_backend(templates, cfg, report);
  write_seqs(out / "translated.txt", translated);

  const auto restored = restore_all(translated, sidecar, report);
  write_seqs(out / "restored.txt", restored);

  // synthetic pair: back-translated source side, cleaned target side
  write_seqs(out / "synth.src", restored);
  write_seqs(out / "synth.tgt", cleaned);

  if (cfg.qefilter) {
    if (restored.empty()) throw DataError("qefilter: empty synthetic corpus");
    const NgramModel src_lm = NgramModel::load(cfg.src_lm_path);
    const NgramModel tgt_lm = NgramModel::load(cfg.tgt_lm_path);
    const AlignModel am = AlignModel::load(cfg.align_model_path);
    const auto result =
        build_synthetic(restored, cleaned, src_lm, tgt_lm, am, cfg, report);
    std::vector<TokenSeq> kept_src, kept_tgt;
    for (const auto& sp : result.kept) {
      kept_src.push_back(sp.src);
      kept_tgt.push_back(sp.tgt);
    }
    write_seqs(out / "clean.src", kept_src);
    write_seqs(out / "clean.tgt", kept_tgt);
    std::ofstream rf(out / "clean.report.tsv", std::ios::binary);
    write_filter_report(rf, result.scored);
  }

  std::ofstream rr(out / "run.report.txt", std::ios::binary);
  report.write(rr);
  return report;
}

}  // namespace forge
