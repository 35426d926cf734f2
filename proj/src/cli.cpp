#include "chunkblit/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "chunkblit/assets.hpp"
#include "chunkblit/png_io.hpp"

namespace chunkblit::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct CommonOptions {
  std::string style;
  std::vector<std::string> source_guides;
  std::vector<std::string> target_guides;
  float threshold = 0.1f;
  int levels = 0;
  int spacing = 4;
  std::uint64_t seed = 0;
  std::string resolve = "vote";
  int patch_radius = 2;
  int threads = 1;
  std::string backend = "auto";
  int lut_bins = kDefaultLookupResolution;
  std::string out;
  std::string stats_json;
  std::string coords_out;
  std::string chunks_out;
};

struct AnimateOptions {
  int frames = 0;
  bool no_reseed = false;
};

struct BenchOptions {
  int size = 1024;
  int warmup = 1;
  int iterations = 5;
  int multi_threads = 8;
  std::string json;
};

void add_synthesis_options(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--style", o.style, "Style exemplar PNG");
  cmd.add_option("--source-guide", o.source_guides, "Source guide KIND[:WEIGHT]=PATH (repeatable)");
  cmd.add_option("--target-guide", o.target_guides, "Target guide KIND[:WEIGHT]=PATH (repeatable)");
  cmd.add_option("--threshold", o.threshold, "Guidance error threshold t in [0, 4]");
  cmd.add_option("--levels", o.levels, "Seed hierarchy levels (0 = automatic)");
  cmd.add_option("--spacing", o.spacing, "Finest seed spacing in pixels");
  cmd.add_option("--seed", o.seed, "Jitter RNG seed");
  cmd.add_option("--resolve", o.resolve, "Colour resolution: blit or vote");
  cmd.add_option("--patch-radius", o.patch_radius, "Voting patch radius");
  cmd.add_option("--threads", o.threads, "Worker threads");
  cmd.add_option("--backend", o.backend, "Guide lookup: auto, table or exact");
  cmd.add_option("--lut-bins", o.lut_bins, "Quantized lookup bins per axis");
}

void add_output_options(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--out", o.out, "Output PNG (a %d pattern for animate)");
  cmd.add_option("--stats-json", o.stats_json, "Write a JSON statistics report");
  cmd.add_option("--coords-out", o.coords_out, "Write the 16-bit coordinate field PNG");
  cmd.add_option("--chunks-out", o.chunks_out, "Write a chunk label visualization PNG");
}

ColorImage load_png(const std::string& path) {
  try {
    return read_png(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<GuideSpec> parse_specs(const std::vector<std::string>& raw) {
  std::vector<GuideSpec> out;
  for (const auto& text : raw) out.push_back(parse_guide_spec(text));
  return out;
}

void require_matching_kinds(const std::vector<GuideSpec>& source,
                            const std::vector<GuideSpec>& target) {
  if (source.empty()) throw ConfigError("at least one --source-guide is required");
  bool same = source.size() == target.size();
  for (std::size_t i = 0; same && i < source.size(); ++i)
    same = source[i].kind == target[i].kind && source[i].weight == target[i].weight;
  if (!same)
    throw ConfigError("source and target guides must list the same kinds and weights in the same order");
}

SynthesisParams make_params(const CommonOptions& o, const GuideField& source) {
  if (!(o.threshold >= 0.0f && o.threshold <= 4.0f))
    throw ConfigError("--threshold must lie in [0, 4]");
  if (o.threads < 1) throw ConfigError("--threads must be at least 1");
  SynthesisParams p;
  p.threshold = o.threshold;
  p.hierarchy.levels = o.levels;
  p.hierarchy.spacing_base = o.spacing;
  p.rng_seed = o.seed;
  p.patch_radius = o.patch_radius;
  p.workers = o.threads;
  p.lookup_resolution = o.lut_bins;
  if (o.resolve == "blit") {
    p.resolve = ResolveMode::Blit;
  } else if (o.resolve == "vote") {
    p.resolve = ResolveMode::Vote;
  } else {
    throw ConfigError("--resolve must be blit or vote");
  }
  if (o.backend == "table") {
    p.backend = LookupBackend::QuantizedTable;
  } else if (o.backend == "exact") {
    p.backend = LookupBackend::ExactSearch;
  } else if (o.backend == "auto") {
    p.backend = source.channels() == 2 ? LookupBackend::QuantizedTable : LookupBackend::ExactSearch;
  } else {
    throw ConfigError("--backend must be auto, table or exact");
  }
  try {
    p.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  f << text;
  if (!f) throw IoError("failed writing " + path);
}

struct Loaded {
  ColorImage style;
  GuideField source;
  std::vector<GuideSpec> source_specs;
  std::vector<GuideSpec> target_specs;
};

Loaded load_source_side(const CommonOptions& o) {
  if (o.style.empty()) throw ConfigError("--style is required");
  Loaded in;
  in.style = load_png(o.style);
  in.source_specs = parse_specs(o.source_guides);
  in.target_specs = parse_specs(o.target_guides);
  require_matching_kinds(in.source_specs, in.target_specs);
  in.source = load_guides(in.source_specs, in.style.width(), in.style.height());
  if (in.source.width() != in.style.width() || in.source.height() != in.style.height())
    throw ConfigError("source guides must match the style exemplar dimensions");
  return in;
}

HierarchyParams hierarchy_for(const SynthesisParams& params, const GuideField& source,
                              const GuideField& target) {
  try {
    return resolve_hierarchy(params, source, target);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

int cmd_blit(const CommonOptions& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
  Loaded in = load_source_side(o);
  const GuideField target = load_guides(in.target_specs, in.style.width(), in.style.height());
  const SynthesisParams params = make_params(o, in.source);
  const HierarchyParams hierarchy = hierarchy_for(params, in.source, target);

  const auto start = Clock::now();
  const GuideLookup lut = build_lookup(in.source, params.backend, params.lookup_resolution);
  const SynthesisResult result = synthesize(in.style, in.source, target, lut, params);
  const double wall = elapsed_ms(start);

  write_png(o.out, result.image);
  if (!o.coords_out.empty()) write_png(o.coords_out, encode_coords(result.coords));
  if (!o.chunks_out.empty()) write_png(o.chunks_out, chunk_visualization(result.coords, target));
  if (!o.stats_json.empty())
    write_text(o.stats_json,
               to_json(collect_stats(result.coords, target, hierarchy.levels, wall)).dump(2) + "\n");
  return kExitOk;
}

int cmd_animate(const CommonOptions& o, const AnimateOptions& a) {
  if (o.out.empty()) throw ConfigError("--out is required");
  if (a.frames < 1) throw ConfigError("--frames must be at least 1");
  if (o.out.find('%') == std::string::npos)
    throw ConfigError("--out must be a frame pattern such as frame_%03d.png");
  Loaded in = load_source_side(o);
  const SynthesisParams params = make_params(o, in.source);

  std::vector<GuideField> frames;
  for (int i = 0; i < a.frames; ++i) {
    std::vector<GuideSpec> specs = in.target_specs;
    for (auto& spec : specs) spec.path = expand_pattern(spec.path, i);
    frames.push_back(load_guides(specs, in.style.width(), in.style.height()));
    if (frames.back().width() != frames.front().width() ||
        frames.back().height() != frames.front().height())
      throw ConfigError("frame " + std::to_string(i) + " differs in dimensions from frame 0");
  }
  const HierarchyParams hierarchy = hierarchy_for(params, in.source, frames.front());

  const auto start = Clock::now();
  const auto results = animate(in.style, in.source, frames, params, {.reseed = !a.no_reseed});
  const double wall = elapsed_ms(start);

  std::vector<ColorImage> images;
  nlohmann::json per_frame = nlohmann::json::array();
  for (int i = 0; i < a.frames; ++i) {
    write_png(expand_pattern(o.out, i), results[i].image);
    if (!o.coords_out.empty())
      write_png(expand_pattern(o.coords_out, i), encode_coords(results[i].coords));
    if (!o.chunks_out.empty())
      write_png(expand_pattern(o.chunks_out, i), chunk_visualization(results[i].coords, frames[i]));
    per_frame.push_back(to_json(collect_stats(results[i].coords, frames[i], hierarchy.levels,
                                              wall / a.frames)));
    images.push_back(results[i].image);
  }
  if (!o.stats_json.empty()) {
    const nlohmann::json report = {{"frames", per_frame},
                                   {"flicker", flicker_metric(images)},
                                   {"reseed", !a.no_reseed},
                                   {"wall_ms", wall}};
    write_text(o.stats_json, report.dump(2) + "\n");
  }
  return kExitOk;
}

struct BenchRun {
  int threads = 1;
  double kernel_ms = 0.0;
  double resolve_ms = 0.0;
  double mp_per_s = 0.0;
  std::uint64_t checksum = 0;
};

BenchRun bench_once(const ColorImage& style, const GuideField& source, const GuideField& target,
                    const GuideLookup& lut, SynthesisParams params, int threads, int warmup,
                    int iterations) {
  params.workers = threads;
  BenchRun run;
  run.threads = threads;
  SynthesisResult last;
  for (int i = 0; i < warmup + iterations; ++i) {
    const auto t0 = Clock::now();
    last.coords = synthesize_coords(source, target, lut, params);
    const auto t1 = Clock::now();
    last.image = resolve_colors(last.coords, style, params.resolve, params.patch_radius, threads);
    const auto t2 = Clock::now();
    if (i < warmup) continue;
    run.kernel_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
    run.resolve_ms += std::chrono::duration<double, std::milli>(t2 - t1).count();
  }
  run.kernel_ms /= iterations;
  run.resolve_ms /= iterations;
  const double pixels = double(target.width()) * target.height();
  run.mp_per_s = pixels / ((run.kernel_ms + run.resolve_ms) * 1e3);
  run.checksum = checksum(last.image, last.coords);
  return run;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int cmd_bench(CommonOptions o, const BenchOptions& b, bool resolve_given) {
  if (b.iterations < 1) throw ConfigError("--iterations must be at least 1");
  if (b.warmup < 0) throw ConfigError("--warmup must be non-negative");
  if (b.multi_threads < 1) throw ConfigError("--threads must be at least 1");
  if (!resolve_given) o.resolve = "blit";

  ColorImage style;
  GuideField source, target;
  std::string scenario;
  if (o.style.empty()) {
    if (b.size < 16) throw ConfigError("--size must be at least 16");
    const auto sphere = assets::lit_sphere(256);
    style = sphere.style;
    source = normal_guide(sphere.normals);
    target = normal_guide(assets::torus_normals(b.size, b.size));
    scenario = "bundled lit sphere -> torus normals";
  } else {
    Loaded in = load_source_side(o);
    style = std::move(in.style);
    source = std::move(in.source);
    target = load_guides(in.target_specs, style.width(), style.height());
    scenario = o.style;
  }
  const SynthesisParams params = make_params(o, source);
  const HierarchyParams hierarchy = hierarchy_for(params, source, target);

  const auto build_start = Clock::now();
  const GuideLookup lut = build_lookup(source, params.backend, params.lookup_resolution);
  const double build_ms = elapsed_ms(build_start);

  const BenchRun single = bench_once(style, source, target, lut, params, 1, b.warmup, b.iterations);
  const BenchRun multi =
      bench_once(style, source, target, lut, params, b.multi_threads, b.warmup, b.iterations);

  auto run_json = [&](const BenchRun& r) {
    return nlohmann::json{{"threads", r.threads},
                          {"kernel_ms", r.kernel_ms},
                          {"resolve_ms", r.resolve_ms},
                          {"frame_ms", r.kernel_ms + r.resolve_ms},
                          {"mp_per_s", r.mp_per_s},
                          {"checksum", hex(r.checksum)}};
  };
  const nlohmann::json report = {
      {"scenario", scenario},
      {"width", target.width()},
      {"height", target.height()},
      {"levels", hierarchy.levels},
      {"threshold", params.threshold},
      {"resolve", o.resolve},
      {"backend", params.backend == LookupBackend::QuantizedTable ? "table" : "exact"},
      {"warmup", b.warmup},
      {"iterations", b.iterations},
      {"lookup_build_ms", build_ms},
      {"single", run_json(single)},
      {"multi", run_json(multi)},
      {"checksums_match", single.checksum == multi.checksum},
      {"reference_mp_per_s", 10.0},
  };

  std::printf("scenario        %s (%dx%d, %d levels, t=%.3f, %s)\n", scenario.c_str(),
              target.width(), target.height(), hierarchy.levels, double(params.threshold),
              o.resolve.c_str());
  std::printf("lookup build    %.2f ms (excluded from per-frame cost)\n", build_ms);
  for (const BenchRun* r : {&single, &multi})
    std::printf("%2d thread(s)    %.2f MP/s  kernel %.2f ms  resolve %.2f ms  checksum %s\n",
                r->threads, r->mp_per_s, r->kernel_ms, r->resolve_ms, hex(r->checksum).c_str());
  std::printf("reference       10 MP/s\n");
  if (!b.json.empty()) write_text(b.json, report.dump(2) + "\n");
  return single.checksum == multi.checksum ? kExitOk : kExitRuntime;
}

}  // namespace

std::string kind_name(GuideKind kind) {
  switch (kind) {
    case GuideKind::Normal: return "normal";
    case GuideKind::Uv: return "uv";
    case GuideKind::Displacement: return "displacement";
    case GuideKind::Segmentation: return "segmentation";
    case GuideKind::Appearance: return "appearance";
  }
  return "unknown";
}

GuideSpec parse_guide_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw ConfigError("guide must be KIND=PATH or KIND:WEIGHT=PATH, got '" + text + "'");
  std::string head = text.substr(0, eq);
  GuideSpec spec;
  spec.path = text.substr(eq + 1);
  if (const auto colon = head.find(':'); colon != std::string::npos) {
    try {
      std::size_t used = 0;
      spec.weight = std::stof(head.substr(colon + 1), &used);
      if (used != head.size() - colon - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("bad guide weight in '" + text + "'");
    }
    if (!(spec.weight >= 0.0f)) throw ConfigError("guide weight must be non-negative in '" + text + "'");
    head.resize(colon);
  }
  for (GuideKind kind : {GuideKind::Normal, GuideKind::Uv, GuideKind::Displacement,
                         GuideKind::Segmentation, GuideKind::Appearance})
    if (head == kind_name(kind)) {
      spec.kind = kind;
      return spec;
    }
  throw ConfigError("unknown guide kind '" + head +
                    "' (expected normal, uv, displacement, segmentation or appearance)");
}

GuideField load_guides(const std::vector<GuideSpec>& specs, int reference_width,
                       int reference_height) {
  std::vector<GuideField> parts;
  for (const auto& spec : specs) {
    const ColorImage img = load_png(spec.path);
    try {
      GuideField part;
      switch (spec.kind) {
        case GuideKind::Normal: part = normal_guide(img); break;
        case GuideKind::Uv: part = uv_guide(img); break;
        case GuideKind::Displacement:
          part = displacement_guide(img, reference_width, reference_height);
          break;
        case GuideKind::Segmentation: part = segmentation_guide(img); break;
        case GuideKind::Appearance: part = appearance_guide(img); break;
      }
      if (spec.kind != GuideKind::Segmentation) part = with_uniform_weight(std::move(part), spec.weight);
      parts.push_back(std::move(part));
    } catch (const ContractViolation& e) {
      throw ConfigError(spec.path + ": " + e.what());
    }
  }
  try {
    return compose_guides(parts);
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("cannot combine guides: ") + e.what());
  }
}

std::string expand_pattern(const std::string& pattern, int index) {
  const auto pct = pattern.find('%');
  if (pct == std::string::npos) return pattern;
  std::size_t end = pct + 1;
  int width = 0;
  bool zero = false;
  if (end < pattern.size() && pattern[end] == '0') {
    zero = true;
    ++end;
  }
  while (end < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[end])))
    width = width * 10 + (pattern[end++] - '0');
  if (end >= pattern.size() || pattern[end] != 'd')
    throw ConfigError("frame pattern must use %d or %0Nd: '" + pattern + "'");
  std::string number = std::to_string(index);
  if (int(number.size()) < width) number.insert(0, std::size_t(width) - number.size(), zero ? '0' : ' ');
  return pattern.substr(0, pct) + number + pattern.substr(end + 1);
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Guided example-based stylization by chunk transfer"};
  app.require_subcommand(1);

  CommonOptions blit_opts;
  auto* blit = app.add_subcommand("blit", "Stylize one target");
  add_synthesis_options(*blit, blit_opts);
  add_output_options(*blit, blit_opts);

  CommonOptions anim_opts;
  AnimateOptions anim;
  auto* animate_cmd = app.add_subcommand("animate", "Stylize a sequence of target guide frames");
  add_synthesis_options(*animate_cmd, anim_opts);
  add_output_options(*animate_cmd, anim_opts);
  animate_cmd->add_option("--frames", anim.frames, "Number of frames (patterns expand 0..N-1)");
  animate_cmd->add_flag("--no-reseed", anim.no_reseed, "Keep the jitter fixed across frames");

  CommonOptions bench_opts;
  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure synthesis throughput");
  bench_cmd->add_option("--style", bench_opts.style, "Style exemplar PNG (bundled scenario if omitted)");
  bench_cmd->add_option("--source-guide", bench_opts.source_guides, "Source guide KIND[:WEIGHT]=PATH");
  bench_cmd->add_option("--target-guide", bench_opts.target_guides, "Target guide KIND[:WEIGHT]=PATH");
  bench_cmd->add_option("--threshold", bench_opts.threshold, "Guidance error threshold");
  bench_cmd->add_option("--levels", bench_opts.levels, "Seed hierarchy levels (0 = automatic)");
  bench_cmd->add_option("--spacing", bench_opts.spacing, "Finest seed spacing in pixels");
  bench_cmd->add_option("--seed", bench_opts.seed, "Jitter RNG seed");
  auto* bench_resolve = bench_cmd->add_option("--resolve", bench_opts.resolve, "blit (default) or vote");
  bench_cmd->add_option("--patch-radius", bench_opts.patch_radius, "Voting patch radius");
  bench_cmd->add_option("--backend", bench_opts.backend, "Guide lookup: auto, table or exact");
  bench_cmd->add_option("--lut-bins", bench_opts.lut_bins, "Quantized lookup bins per axis");
  bench_cmd->add_option("--threads", bench.multi_threads, "Threads for the multi-threaded run");
  bench_cmd->add_option("--size", bench.size, "Bundled target edge length in pixels");
  bench_cmd->add_option("--warmup", bench.warmup, "Unmeasured warmup iterations");
  bench_cmd->add_option("--iterations", bench.iterations, "Measured iterations");
  bench_cmd->add_option("--json", bench.json, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*blit) return cmd_blit(blit_opts);
    if (*animate_cmd) return cmd_animate(anim_opts, anim);
    if (*bench_cmd) return cmd_bench(bench_opts, bench, bench_resolve->count() > 0);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EmptyExemplarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace chunkblit::cli
