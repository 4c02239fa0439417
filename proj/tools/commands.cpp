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

#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/asciiart.hpp"
#include "forge/bleu.hpp"
#include "forge/bpe.hpp"
#include "forge/config.hpp"
#include "forge/error.hpp"
#include "forge/ibm1.hpp"
#include "forge/lineio.hpp"
#include "forge/ngram.hpp"
#include "forge/pipeline.hpp"
#include "forge/placeholder.hpp"
#include "forge/qefilter.hpp"
#include "forge/token.hpp"
#include "forge/tokenize.hpp"
#include "forge/truecase.hpp"

namespace forge::cli {
namespace {

struct IoOptions {
  std::string input;   // empty = stdin
  std::string output;  // empty = stdout
};

void add_io(CLI::App* cmd, IoOptions* io) {
  cmd->add_option("input", io->input, "input file (default: stdin)");
  cmd->add_option("-o,--output", io->output, "output file (default: stdout)");
}

struct OpenedIo {
  std::ifstream fin;
  std::ofstream fout;
  bool use_fin = false;
  bool use_fout = false;

  std::istream& in() { return use_fin ? fin : std::cin; }
  std::ostream& out() { return use_fout ? fout : std::cout; }
};

OpenedIo open_io(const IoOptions& io) {
  OpenedIo o;
  if (!io.input.empty()) {
    o.fin.open(io.input, std::ios::binary);
    if (!o.fin) throw DataError("cannot open file: " + io.input);
    o.use_fin = true;
  }
  if (!io.output.empty()) {
    o.fout.open(io.output, std::ios::binary);
    if (!o.fout) throw DataError("cannot open file for writing: " + io.output);
    o.use_fout = true;
  }
  return o;
}

std::vector<TokenSeq> read_pretokenized(std::istream& in) {
  std::vector<TokenSeq> corpus;
  for_each_line(in, [&](std::string& line, std::size_t) {
    corpus.push_back(from_pretokenized(line));
  });
  return corpus;
}

std::vector<TokenSeq> read_pretokenized_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return read_pretokenized(in);
}

std::vector<std::pair<TokenSeq, TokenSeq>> read_parallel(
    const std::string& src_path, const std::string& tgt_path) {
  const auto src = read_pretokenized_file(src_path);
  const auto tgt = read_pretokenized_file(tgt_path);
  if (src.size() != tgt.size()) {
    throw DataError("parallel files are misaligned: " + src_path + " has " +
                    std::to_string(src.size()) + " lines, " + tgt_path +
                    " has " + std::to_string(tgt.size()));
  }
  std::vector<std::pair<TokenSeq, TokenSeq>> pairs;
  pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    pairs.emplace_back(src[i], tgt[i]);
  }
  return pairs;
}

// ---------------------------------------------------------------- textnorm

int cmd_textnorm(CLI::App& app, int argc, const char* const* argv) {
  IoOptions io;
  std::size_t max_len = 80;
  std::string model_path;

  auto* tok = app.add_subcommand("tokenize", "whitespace + punctuation tokenizer");
  add_io(tok, &io);
  auto* split = app.add_subcommand("split", "rule-based sentence splitter");
  add_io(split, &io);
  auto* lenf = app.add_subcommand("lenfilter", "drop 1-token and overlong sentences");
  lenf->add_option("--max-len", max_len, "maximum token count")->capture_default_str();
  add_io(lenf, &io);
  auto* ttrain = app.add_subcommand("truecase-train", "train a casing model");
  ttrain->add_option("--model", model_path, "model output path")->required();
  add_io(ttrain, &io);
  auto* tapply = app.add_subcommand("truecase-apply", "apply a casing model");
  tapply->add_option("--model", model_path, "model path")->required();
  add_io(tapply, &io);
  app.require_subcommand(1);
  app.parse(argc, argv);

  auto o = open_io(io);
  if (tok->parsed()) {
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      o.out() << tokenize_basic(line).join() << '\n';
    });
  } else if (split->parsed()) {
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      for (const auto& sent : split_sentences(line)) o.out() << sent << '\n';
    });
  } else if (lenf->parsed()) {
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      if (keep_by_length(from_pretokenized(line), max_len)) o.out() << line << '\n';
    });
  } else if (ttrain->parsed()) {
    CaseModel::train(read_pretokenized(o.in())).save(model_path);
  } else if (tapply->parsed()) {
    const CaseModel model = CaseModel::load(model_path);
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      o.out() << model.apply(from_pretokenized(line)).join() << '\n';
    });
  }
  return 0;
}

// ---------------------------------------------------------------- asciiart

int cmd_asciiart(CLI::App& app, int argc, const char* const* argv) {
  IoOptions io;
  double threshold = 6.0;
  bool sample = false;
  auto* filter = app.add_subcommand("filter", "drop ASCII-art-like sentences");
  filter->add_option("--threshold", threshold, "sigma threshold")->capture_default_str();
  filter->add_flag("--sample-stddev", sample, "use sample instead of population stddev");
  add_io(filter, &io);
  app.require_subcommand(1);
  app.parse(argc, argv);

  auto o = open_io(io);
  const auto corpus = read_pretokenized(o.in());
  const auto [kept, report] = filter_ascii_art(corpus, threshold, sample);
  for (const auto& sent : kept) o.out() << sent.join() << '\n';
  std::cerr << "kept=" << report.kept << " discarded=" << report.discarded << '\n';
  return 0;
}

// -------------------------------------------------------------- placeholder

int cmd_placeholder(CLI::App& app, int argc, const char* const* argv) {
  IoOptions io;
  std::string sidecar_path;
  auto* apply = app.add_subcommand("apply", "replace specials with <PH>");
  apply->add_option("--sidecar", sidecar_path, "sidecar output path")->required();
  add_io(apply, &io);
  auto* rest = app.add_subcommand("restore", "fill <PH> slots from a sidecar");
  rest->add_option("--sidecar", sidecar_path, "sidecar input path")->required();
  add_io(rest, &io);
  app.require_subcommand(1);
  app.parse(argc, argv);

  auto o = open_io(io);
  if (apply->parsed()) {
    std::vector<std::vector<Special>> records;
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      auto rec = placeholderize(from_pretokenized(line));
      o.out() << rec.tmpl.join() << '\n';
      records.push_back(std::move(rec.specials));
    });
    write_sidecar(sidecar_path, records);
  } else {
    const auto records = read_sidecar(sidecar_path);
    std::size_t repaired = 0;
    std::size_t line_count = 0;
    for_each_line(o.in(), [&](std::string& line, std::size_t line_no) {
      if (line_no > records.size()) {
        throw DataError("more input lines than sidecar records", line_no);
      }
      auto [sent, stats] = restore(from_pretokenized(line), records[line_no - 1]);
      if (stats.repaired()) ++repaired;
      o.out() << sent.join() << '\n';
      ++line_count;
    });
    if (line_count < records.size()) {
      throw DataError("sidecar has " + std::to_string(records.size()) +
                      " records but input has " + std::to_string(line_count) +
                      " lines");
    }
    if (repaired > 0) std::cerr << "repaired=" << repaired << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------ subword

int cmd_subword(CLI::App& app, int argc, const char* const* argv) {
  IoOptions io;
  std::string model_path;
  std::string joint_path;
  std::string marker{kBpeDefaultMarker};
  std::size_t merges = 16000;

  auto* train = app.add_subcommand("train", "learn BPE merges");
  train->add_option("--merges", merges, "number of merge operations")->capture_default_str();
  train->add_option("--joint", joint_path, "second corpus for joint training");
  train->add_option("--model", model_path, "model output path")->required();
  add_io(train, &io);
  auto* apply = app.add_subcommand("apply", "segment tokens into subwords");
  apply->add_option("--model", model_path, "model path")->required();
  add_io(apply, &io);
  auto* revert = app.add_subcommand("revert", "undo subword segmentation");
  revert->add_option("--marker", marker, "continuation marker")->capture_default_str();
  add_io(revert, &io);
  app.require_subcommand(1);
  app.parse(argc, argv);

  auto o = open_io(io);
  if (train->parsed()) {
    const auto corpus = read_pretokenized(o.in());
    std::optional<std::vector<TokenSeq>> second;
    if (!joint_path.empty()) second = read_pretokenized_file(joint_path);
    BpeModel::train_joint(corpus, second ? &*second : nullptr, merges).save(model_path);
  } else if (apply->parsed()) {
    const BpeModel model = BpeModel::load(model_path);
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      o.out() << model.apply(from_pretokenized(line)).join() << '\n';
    });
  } else {
    for_each_line(o.in(), [&](std::string& line, std::size_t line_no) {
      try {
        o.out() << bpe_revert(from_pretokenized(line), marker).join() << '\n';
      } catch (const DataError& e) {
        throw DataError(std::string(e.what()), line_no);
      }
    });
  }
  return 0;
}

// -------------------------------------------------------------------- align

int cmd_align(CLI::App& app, int argc, const char* const* argv) {
  std::string src_path, tgt_path, model_path, output;
  std::size_t iters = 10;
  bool reverse = false;
  bool reestimate_null = false;

  auto add_parallel = [&](CLI::App* cmd) {
    cmd->add_option("--src", src_path, "source-side file")->required();
    cmd->add_option("--tgt", tgt_path, "target-side file")->required();
    cmd->add_flag("--reverse", reverse, "swap source and target roles");
    cmd->add_option("-o,--output", output, "output file (default: stdout)");
  };
  auto* train = app.add_subcommand("train", "EM training of the lexical table");
  train->add_option("--iters", iters, "EM iterations")->capture_default_str();
  train->add_flag("--reestimate-null", reestimate_null,
                  "also reestimate the NULL row (slower convergence)");
  train->add_option("--model", model_path, "model output path")->required();
  add_parallel(train);
  auto* score = app.add_subcommand("score", "per-pair alignment log scores");
  score->add_option("--model", model_path, "model path")->required();
  add_parallel(score);
  auto* viterbi = app.add_subcommand("viterbi", "hard alignment links");
  viterbi->add_option("--model", model_path, "model path")->required();
  add_parallel(viterbi);
  app.require_subcommand(1);
  app.parse(argc, argv);

  auto pairs = read_parallel(src_path, tgt_path);
  if (reverse) {
    for (auto& [src, tgt] : pairs) std::swap(src, tgt);
  }
  OpenedIo o = open_io({.input = {}, .output = output});
  if (train->parsed()) {
    AlignModel::TrainOptions opts;
    opts.iterations = iters;
    opts.reestimate_null = reestimate_null;
    AlignModel::TrainStats stats;
    const AlignModel model = AlignModel::train(pairs, opts, &stats);
    model.save(model_path);
    if (stats.skipped_pairs > 0) {
      std::cerr << "skipped " << stats.skipped_pairs << " pairs with an empty side\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", stats.log_likelihood.back());
    std::cerr << "final log-likelihood: " << buf << '\n';
  } else if (score->parsed()) {
    const AlignModel model = AlignModel::load(model_path);
    char buf[64];
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].second.empty()) {
        throw DataError("empty target side", i + 1);
      }
      std::snprintf(buf, sizeof(buf), "%.6f",
                    model.score(pairs[i].first, pairs[i].second));
      o.out() << buf << '\n';
    }
  } else {
    const AlignModel model = AlignModel::load(model_path);
    for (const auto& [src, tgt] : pairs) {
      const auto links = model.viterbi(src, tgt);
      for (std::size_t k = 0; k < links.size(); ++k) {
        if (k) o.out() << ' ';
        o.out() << links[k].first << '-' << links[k].second;
      }
      o.out() << '\n';
    }
  }
  return 0;
}

// ----------------------------------------------------------------------- lm

int cmd_lm(CLI::App& app, int argc, const char* const* argv) {
  IoOptions io;
  std::string model_path;
  NgramModel::TrainOptions opts;

  auto* train = app.add_subcommand("train", "train an n-gram model");
  train->add_option("--order", opts.order, "model order")->capture_default_str();
  train->add_option("--discount", opts.discount, "absolute discount")->capture_default_str();
  train->add_flag("--unk-from-singletons", opts.unk_from_singletons,
                  "map singleton types to <unk>");
  train->add_option("--model", model_path, "model output path")->required();
  add_io(train, &io);
  auto* score = app.add_subcommand("score", "per-sentence log10 scores");
  score->add_option("--model", model_path, "model path")->required();
  add_io(score, &io);
  auto* ppl = app.add_subcommand("ppl", "corpus perplexity");
  ppl->add_option("--model", model_path, "model path")->required();
  add_io(ppl, &io);
  app.require_subcommand(1);
  app.parse(argc, argv);

  auto o = open_io(io);
  if (train->parsed()) {
    NgramModel::train(read_pretokenized(o.in()), opts).save(model_path);
  } else if (score->parsed()) {
    const NgramModel model = NgramModel::load(model_path);
    char buf[96];
    constexpr double kLn10 = 2.302585092994046;
    for_each_line(o.in(), [&](std::string& line, std::size_t) {
      const auto s = model.score(from_pretokenized(line));
      std::snprintf(buf, sizeof(buf), "%.6f\t%.6f", s.total / kLn10,
                    s.per_token / kLn10);
      o.out() << buf << '\n';
    });
  } else {
    const NgramModel model = NgramModel::load(model_path);
    const auto corpus = read_pretokenized(o.in());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "ppl=%.6f", model.perplexity(corpus));
    o.out() << buf << '\n';
  }
  return 0;
}

// ----------------------------------------------------------------- qefilter

int cmd_qefilter(CLI::App& app, int argc, const char* const* argv) {
  std::string src_lm_path, tgt_lm_path, align_path, src_path, tgt_path;
  std::string out_prefix = "clean";
  double multiplier = 2.0;
  app.add_option("--src-lm", src_lm_path, "source-side language model")->required();
  app.add_option("--tgt-lm", tgt_lm_path, "target-side language model")->required();
  app.add_option("--align", align_path, "alignment model")->required();
  app.add_option("--multiplier", multiplier, "z-score multiplier")->capture_default_str();
  app.add_option("--src", src_path, "source-side file")->required();
  app.add_option("--tgt", tgt_path, "target-side file")->required();
  app.add_option("--out-prefix", out_prefix, "output prefix")->capture_default_str();
  app.parse(argc, argv);

  const auto pairs = read_parallel(src_path, tgt_path);
  if (pairs.empty()) throw DataError("qefilter: empty input");
  const NgramModel src_lm = NgramModel::load(src_lm_path);
  const NgramModel tgt_lm = NgramModel::load(tgt_lm_path);
  const AlignModel am = AlignModel::load(align_path);
  auto scored = score_pairs(src_lm, tgt_lm, am, pairs);
  const auto [kept, report] = zscore_filter(scored, multiplier);

  std::ofstream src_out(out_prefix + ".src", std::ios::binary);
  std::ofstream tgt_out(out_prefix + ".tgt", std::ios::binary);
  if (!src_out || !tgt_out) {
    throw DataError("cannot open output files with prefix " + out_prefix);
  }
  for (const auto& sp : kept) {
    src_out << sp.src.join() << '\n';
    tgt_out << sp.tgt.join() << '\n';
  }
  std::ofstream report_out(out_prefix + ".report.tsv", std::ios::binary);
  write_filter_report(report_out, scored);
  std::cerr << "kept=" << report.kept << '/' << report.total
            << " rejected_s_lm=" << report.rejected_s_lm
            << " rejected_t_lm=" << report.rejected_t_lm
            << " rejected_a=" << report.rejected_a << '\n';
  return 0;
}

// --------------------------------------------------------------------- eval

int cmd_eval(CLI::App& app, int argc, const char* const* argv) {
  std::string hyp_path, ref_path;
  std::size_t max_n = 4;
  auto* bleu = app.add_subcommand("bleu", "case-sensitive corpus BLEU");
  bleu->add_option("--hyp", hyp_path, "hypothesis file")->required();
  bleu->add_option("--ref", ref_path, "reference file")->required();
  bleu->add_option("--max-n", max_n, "highest n-gram order")->capture_default_str();
  app.require_subcommand(1);
  app.parse(argc, argv);

  const auto hyps = read_pretokenized_file(hyp_path);
  const auto refs = read_pretokenized_file(ref_path);
  const auto bd = bleu_corpus(hyps, refs, max_n);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "BLEU=%.2f", bd.score * 100.0);
  std::cout << buf;
  for (std::size_t n = 0; n < bd.precisions.size(); ++n) {
    std::snprintf(buf, sizeof(buf), " p%zu=%.4f", n + 1, bd.precisions[n]);
    std::cout << buf;
  }
  std::snprintf(buf, sizeof(buf), " BP=%.4f ratio=%.4f", bd.brevity_penalty,
                bd.ratio());
  std::cout << buf << '\n';
  return 0;
}

// ---------------------------------------------------------------------- run

int cmd_run(CLI::App& app, int argc, const char* const* argv) {
  std::string config_path;
  app.add_option("--config", config_path, "pipeline config file");
  // every config key is mirrored by a flag; flags override the file
  std::map<std::string, std::string> overrides;
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"--input", "input"},           {"--workdir", "workdir"},
      {"--split", "split"},           {"--lenfilter", "lenfilter"},
      {"--max-len", "max_len"},       {"--aafilter", "aafilter"},
      {"--aa-threshold", "aa_threshold"},
      {"--aa-sample-stddev", "aa_sample_stddev"},
      {"--placeholder", "placeholder"},
      {"--backend", "backend"},       {"--backend-file", "backend_file"},
      {"--qefilter", "qefilter"},     {"--multiplier", "multiplier"},
      {"--src-lm", "src_lm"},         {"--tgt-lm", "tgt_lm"},
      {"--align-model", "align_model"}};
  for (const auto& [flag, key] : keys) {
    app.add_option_function<std::string>(
        flag, [&overrides, k = key](const std::string& v) { overrides[k] = v; },
        "overrides config key " + key);
  }
  app.parse(argc, argv);

  Config cfg;
  if (!config_path.empty()) cfg = Config::from_file(config_path);
  for (const auto& [key, value] : overrides) cfg.set(key, value);
  const PipelineConfig pc = PipelineConfig::from_config(cfg);
  const RunReport report = run_pipeline(pc);
  for (const auto& stage : report.stages) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", stage.wall_ms);
    std::cerr << stage.name << ": " << stage.in << " -> " << stage.out
              << (stage.note.empty() ? "" : " (" + stage.note + ")") << " ["
              << buf << " ms]\n";
  }
  if (report.ph_lines_repaired > 0) {
    std::cerr << "placeholder repairs: deleted_extra=" << report.ph_deleted_extra
              << " appended_missing=" << report.ph_appended_missing
              << " lines=" << report.ph_lines_repaired << '\n';
  }
  return 0;
}

}  // namespace

int run_module(const std::string& module, int argc, const char* const* argv) {
  try {
    CLI::App app;
    app.name(module);
    try {
      if (module == "textnorm") {
        app.description("raw-line normalization");
        return cmd_textnorm(app, argc, argv);
      } else if (module == "asciiart") {
        app.description("word-frequency ASCII-art filter");
        return cmd_asciiart(app, argc, argv);
      } else if (module == "placeholder") {
        app.description("emoji/emoticon/quote placeholder mechanism");
        return cmd_placeholder(app, argc, argv);
      } else if (module == "subword") {
        app.description("byte-pair encoding");
        return cmd_subword(app, argc, argv);
      } else if (module == "align") {
        app.description("IBM Model 1 word alignment");
        return cmd_align(app, argc, argv);
      } else if (module == "lm") {
        app.description("n-gram language modeling");
        return cmd_lm(app, argc, argv);
      } else if (module == "qefilter") {
        app.description("z-score synthetic-corpus filter");
        return cmd_qefilter(app, argc, argv);
      } else if (module == "eval") {
        app.description("translation evaluation");
        return cmd_eval(app, argc, argv);
      } else if (module == "run") {
        app.description("config-driven pipeline");
        return cmd_run(app, argc, argv);
      }
      std::cerr << "unknown module: " << module << '\n';
      return 1;
    } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run_forge(int argc, const char* const* argv) {
  if (argc < 2) {
    std::cerr << "usage: forge <module> [args...]\n"
              << "modules: textnorm asciiart placeholder subword align lm "
                 "qefilter eval run\n";
    return 1;
  }
  return run_module(argv[1], argc - 1, argv + 1);
}

}  // namespace forge::cli
