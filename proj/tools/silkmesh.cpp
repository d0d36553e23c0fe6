// Copyright 2026 The Silkmesh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// silkmesh: command-line front end for the mesh tokenizer.
//
// Machine-readable output is JSON on stdout, human summaries go to stderr.
// Exit codes: 0 ok, 2 I/O or bad input, 3 capacity / unencodable mesh,
// 4 token or grammar error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "silk/json_io.hpp"
#include "silk/silk.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitToken = 4;

int ExitCodeFor(silk::ErrorKind kind) {
  switch (kind) {
    case silk::ErrorKind::kCapacityExceeded:
    case silk::ErrorKind::kUnencodableRow:
    case silk::ErrorKind::kAmbiguousTopology:
    case silk::ErrorKind::kNonManifold:
    case silk::ErrorKind::kNonOrientable:
      return kExitCapacity;
    case silk::ErrorKind::kInvalidToken:
    case silk::ErrorKind::kGrammar:
    case silk::ErrorKind::kFormat:
      return kExitToken;
    default:
      return kExitIo;
  }
}

void WriteFileAtomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw silk::Error(silk::ErrorKind::kIo, "cannot write " + path);
    out << data;
    if (!out) throw silk::Error(silk::ErrorKind::kIo, "write failed for " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw silk::Error(silk::ErrorKind::kIo, "cannot move " + tmp + " to " + path);
  }
}

// Codec settings: SILKSONG_CONFIG, then --config, then individual flags.
struct ConfigFlags {
  std::string file;
  std::optional<int> selfWindow, betweenWindow, maxLayerWidth, maxTokens;
  std::optional<std::uint64_t> seed;
  bool noVerify = false;

  void Register(CLI::App* app) {
    app->add_option("--config", file, "Config file (key = value), overrides SILKSONG_CONFIG");
    app->add_option("--W", selfWindow, "Self-layer window width");
    app->add_option("--Wprime", betweenWindow, "Between-layer window width");
    app->add_option("--m", maxLayerWidth, "Maximum layer width");
    app->add_option("--max-tokens", maxTokens, "Token-length filter threshold");
    app->add_option("--seed", seed, "Seed for randomized steps");
    app->add_flag("--no-verify", noVerify, "Skip encode-time face verification");
  }

  silk::CodecConfig Resolve() const {
    silk::CodecConfig c;
    if (const char* env = std::getenv("SILKSONG_CONFIG"); env && *env) {
      c = silk::LoadConfigFile(env, c);
    }
    if (!file.empty()) c = silk::LoadConfigFile(file, c);
    if (selfWindow) c.selfWindow = *selfWindow;
    if (betweenWindow) c.betweenWindow = *betweenWindow;
    if (maxLayerWidth) c.maxLayerWidth = *maxLayerWidth;
    if (maxTokens) c.maxTokens = *maxTokens;
    if (seed) c.seed = *seed;
    if (noVerify) c.verifyFaces = false;
    c.Validate();
    return c;
  }
};

silk::TokenFormat FormatOf(bool text) {
  return text ? silk::TokenFormat::kText : silk::TokenFormat::kBinary;
}

int CmdRepair(const std::string& input, const std::string& output, const std::string& report,
              const ConfigFlags& flags) {
  const silk::CodecConfig config = flags.Resolve();
  const silk::PreparedMesh prepared = silk::PrepareMesh(silk::LoadObj(input), config);
  silk::SaveObj(prepared.mesh, output);
  const silk::Json log = silk::ToJson(prepared.repair);
  if (!report.empty()) WriteFileAtomic(report, log.dump(2) + "\n");
  std::cout << log.dump() << '\n';
  std::cerr << "repair: " << prepared.repair.processedVertices.size()
            << " non-manifold vertices, " << prepared.repair.duplicatesCreated.size()
            << " duplicates\n";
  return kExitOk;
}

int CmdEncode(const std::string& input, const std::string& output, bool text,
              const ConfigFlags& flags) {
  const silk::CodecConfig config = flags.Resolve();
  const silk::PreparedMesh prepared = silk::PrepareMesh(silk::LoadObj(input), config);
  silk::EncodeTrace trace;
  const silk::TokenSequence tokens = silk::EncodeMesh(prepared.mesh, config, &trace);
  silk::SaveTokens(tokens, output, FormatOf(text));
  const silk::SequenceStats stats = silk::ComputeSequenceStats(tokens, prepared.mesh, config);
  silk::Json j = {{"tokens", stats.tokens},
                  {"faces", stats.faces},
                  {"ratio", stats.compressionRatio},
                  {"tokens_per_face", stats.tokensPerFace},
                  {"max_layer_width", trace.maxLayerWidth}};
  std::cout << j.dump() << '\n';
  std::cerr << "encode: " << stats.faces << " faces -> " << stats.tokens << " tokens\n";
  if (static_cast<long long>(tokens.size()) > config.maxTokens) {
    std::cerr << "warning: " << tokens.size() << " tokens exceed max_tokens " << config.maxTokens
              << "\n";
  }
  return kExitOk;
}

int CmdDecode(const std::string& input, const std::string& output, bool text, bool salvage,
              bool watertight, int maxFill, const std::string& report, const ConfigFlags& flags) {
  const silk::CodecConfig config = flags.Resolve();
  const bool lenient = salvage || !config.strictDecode;
  const silk::Vocabulary vocab(config);
  const silk::TokenSequence tokens =
      silk::LoadTokens(input, vocab.Total(), FormatOf(text), lenient);
  silk::DecodedMesh decoded = silk::DecodeTokens(
      tokens, config, lenient ? silk::DecodeMode::kSalvage : silk::DecodeMode::kStrict);
  for (const std::string& w : decoded.warnings) std::cerr << "warning: " << w << '\n';

  silk::Json j = {{"vertices", decoded.mesh.VertexCount()},
                  {"faces", decoded.mesh.FaceCount()},
                  {"components", decoded.components.size()},
                  {"truncated", decoded.truncated},
                  {"warnings", decoded.warnings}};
  if (watertight) {
    const silk::HoleReport holes = silk::DetectHoles(decoded, config);
    silk::HoleRepair repaired = silk::RepairHoles(decoded, holes, maxFill, config);
    decoded = std::move(repaired.mesh);
    repaired.mesh = {};
    j["watertight"] = silk::ToJson(repaired);
    j["faces"] = decoded.mesh.FaceCount();
    std::cerr << "watertight: boundary edges " << repaired.boundaryBefore << " -> "
              << repaired.boundaryAfter << '\n';
  } else {
    j["holes"] = silk::ToJson(silk::DetectHoles(decoded, config));
  }
  silk::SaveObj(decoded.mesh, output);
  if (!report.empty()) WriteFileAtomic(report, j.dump(2) + "\n");
  std::cout << j.dump() << '\n';
  std::cerr << "decode: " << tokens.size() << " tokens -> " << decoded.mesh.FaceCount()
            << " faces\n";
  return kExitOk;
}

int CmdStats(const std::string& input, bool text, const ConfigFlags& flags) {
  const silk::CodecConfig config = flags.Resolve();
  const silk::Vocabulary vocab(config);
  const silk::TokenSequence tokens = silk::LoadTokens(input, vocab.Total(), FormatOf(text));
  const silk::DecodedMesh decoded = silk::DecodeTokens(tokens, config);
  std::cout << silk::ToJson(silk::ComputeSequenceStats(tokens, decoded.mesh, config)).dump()
            << '\n';
  return kExitOk;
}

int CmdMetrics(const std::string& pred, const std::string& gt, int samples,
               std::uint64_t seed, bool normalize) {
  silk::RawMesh p = silk::LoadObj(pred), g = silk::LoadObj(gt);
  if (normalize) std::tie(p, g) = silk::NormalizeJointly(p, g);
  const silk::MetricsRecord m = silk::ComputeMetrics(p, g, samples, seed);
  std::cout << silk::ToJson(m).dump() << '\n';
  return kExitOk;
}

int CmdPrep(const std::string& corpus, const std::string& manifest, const std::string& schedule,
            int epochs, int jobs, const ConfigFlags& flags) {
  const silk::CodecConfig config = flags.Resolve();
  if (!fs::is_directory(corpus)) {
    throw silk::Error(silk::ErrorKind::kIo, "not a directory: " + corpus);
  }
  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(corpus)) {
    if (entry.is_regular_file() && entry.path().extension() == ".obj") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());

  std::vector<silk::CorpusEntry> entries(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      try {
        entries[i] = silk::ScanMesh(paths[i], config);
      } catch (const silk::Error& e) {
        entries[i].meshPath = paths[i];
        entries[i].error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(paths.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ostringstream lines;
  silk::WriteManifest(lines, entries);
  if (!manifest.empty()) WriteFileAtomic(manifest, lines.str());

  const silk::FilterResult filtered =
      silk::FilterCorpus(entries, config.maxTokens, config.maxLayerWidth);
  silk::Json j = {{"meshes", entries.size()},
                  {"kept", filtered.kept.size()},
                  {"rejected", filtered.rejected.size()}};
  if (!schedule.empty()) {
    if (filtered.kept.empty()) {
      throw silk::Error(silk::ErrorKind::kInvalidArgument, "no mesh passed the filters");
    }
    const silk::SamplingSchedule s = silk::BuildSchedule(filtered.kept, epochs);
    std::ostringstream csv;
    silk::WriteScheduleCsv(csv, s);
    WriteFileAtomic(schedule, csv.str());
    j["classes"] = s.ClassCount();
  }
  std::cout << j.dump() << '\n';
  std::cerr << "prep: " << filtered.kept.size() << " of " << entries.size() << " meshes kept\n";
  return kExitOk;
}

int CmdLayers(const std::string& input, const ConfigFlags& flags) {
  const silk::CodecConfig config = flags.Resolve();
  const silk::PreparedMesh prepared = silk::PrepareMesh(silk::LoadObj(input), config);
  silk::EncodeTrace trace;
  silk::EncodeMesh(prepared.mesh, config, &trace);
  silk::Json comps = silk::Json::array();
  for (const silk::LayeredLabeling& l : trace.labelings) comps.push_back(silk::ToJson(l));
  std::cout << silk::Json{{"components", comps}}.dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"silkmesh: layer-wise mesh tokenizer"};
  app.require_subcommand(1);
  ConfigFlags flags;

  std::string input, output, report;
  bool text = false;

  auto* repair = app.add_subcommand("repair", "Make a mesh manifold (splits non-manifold vertices)");
  repair->add_option("input", input, "Input OBJ")->required();
  repair->add_option("output", output, "Output OBJ")->required();
  repair->add_option("--report", report, "Write the repair log as JSON");
  flags.Register(repair);

  auto* encode = app.add_subcommand("encode", "Encode an OBJ into a token file");
  encode->add_option("input", input, "Input OBJ")->required();
  encode->add_option("output", output, "Output token file")->required();
  encode->add_flag("--text", text, "Write one decimal token per line");
  flags.Register(encode);

  bool salvage = false, watertight = false;
  int maxFill = 64;
  auto* decode = app.add_subcommand("decode", "Decode a token file into an OBJ");
  decode->add_option("input", input, "Input token file")->required();
  decode->add_option("output", output, "Output OBJ")->required();
  decode->add_flag("--text", text, "Read one decimal token per line");
  decode->add_flag("--salvage", salvage, "Keep the valid prefix of a broken stream");
  decode->add_flag("--watertight-repair", watertight, "Fill holes by adding matrix entries");
  decode->add_option("--max-fill", maxFill, "Most entries the hole filler may add")
      ->check(CLI::NonNegativeNumber);
  decode->add_option("--report", report, "Write the decode and hole report as JSON");
  flags.Register(decode);

  auto* stats = app.add_subcommand("stats", "Token statistics of a token file");
  stats->add_option("input", input, "Token file")->required();
  stats->add_flag("--text", text, "Read one decimal token per line");
  flags.Register(stats);

  std::string pred, gt;
  int samples = silk::kDefaultSampleCount;
  std::uint64_t seed = silk::kDefaultSampleSeed;
  bool normalize = false;
  auto* metrics = app.add_subcommand("metrics", "CD, HD, NC and FR between two meshes");
  metrics->add_option("--pred", pred, "Predicted OBJ")->required();
  metrics->add_option("--gt", gt, "Reference OBJ")->required();
  metrics->add_option("--samples", samples, "Surface samples per mesh")
      ->check(CLI::PositiveNumber);
  metrics->add_option("--seed", seed, "Sampling seed");
  metrics->add_flag("--normalize", normalize, "Normalize both meshes by the reference bounds");

  std::string manifest, schedule;
  int epochs = 100;
  int jobs = 1;
  auto* prep = app.add_subcommand("prep", "Scan a corpus: manifest and sampling schedule");
  prep->add_option("corpus", input, "Directory of OBJ files")->required();
  prep->add_option("--manifest", manifest, "JSON-lines manifest output");
  prep->add_option("--schedule", schedule, "CSV sampling schedule output");
  prep->add_option("--epochs", epochs, "Total epochs T")->check(CLI::PositiveNumber);
  prep->add_option("--jobs", jobs, "Meshes scanned in parallel")->check(CLI::PositiveNumber);
  flags.Register(prep);

  auto* layers = app.add_subcommand("layers", "Dump layer labelings as JSON");
  layers->add_option("input", input, "Input OBJ")->required();
  flags.Register(layers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    if (*repair) return CmdRepair(input, output, report, flags);
    if (*encode) return CmdEncode(input, output, text, flags);
    if (*decode) {
      return CmdDecode(input, output, text, salvage, watertight, maxFill, report, flags);
    }
    if (*stats) return CmdStats(input, text, flags);
    if (*metrics) return CmdMetrics(pred, gt, samples, seed, normalize);
    if (*prep) return CmdPrep(input, manifest, schedule, epochs, jobs, flags);
    if (*layers) return CmdLayers(input, flags);
  } catch (const silk::Error& e) {
    std::cerr << "error: " << e.what();
    if (e.position() != silk::Error::npos) std::cerr << " (position " << e.position() << ")";
    std::cerr << '\n';
    return ExitCodeFor(e.kind());
  }
  return kExitIo;
}
