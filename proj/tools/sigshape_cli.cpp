// sigshape: ingest motion clips, build distance matrices, embed and classify.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigshape/analysis.hpp"
#include "sigshape/error.hpp"
#include "sigshape/io.hpp"
#include "sigshape/mocap.hpp"
#include "sigshape/selftest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sigshape;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An Error raised while reading a particular file.
struct FileError : std::runtime_error {
  FileError(const std::string& path, const Error& e) : std::runtime_error(path + ": " + e.what()), code(e.code()) {}
  ErrorCode code;
};

template <class F>
auto with_file(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const Error& e) {
    throw FileError(path, e);
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--weights: not a number: '" + item + "'");
    }
  }
  return out;
}

// Run configuration shared by the subcommands; defaults, then config file, then flags.
struct Settings {
  std::string config_path;
  json config = json::object();

  std::string method = "signature";
  int level = 3;
  int grid = 64;
  int max_step = 4;
  double penalty = 0.0;
  std::string symmetrization = "min";
  std::string mode = "full";
  std::string joints;
  std::string weights;
  std::uint64_t seed = 1;
  std::string format = "csv";
  bool no_parallel = false;

  std::multimap<std::string, CLI::Option*> flags;

  void load_config() {
    if (config_path.empty()) return;
    config = with_file(config_path, [&](const std::string& text) {
      try {
        auto j = json::parse(text);
        if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "config must be a JSON object");
        return j;
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
      }
    });
  }

  bool given(const std::string& key) const {
    const auto [lo, hi] = flags.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (it->second->count() > 0) return true;
    }
    return false;
  }

  template <class T>
  void resolve(const std::string& key, T& value) {
    if (given(key)) return;
    if (!config.contains(key)) return;
    try {
      value = config.at(key).get<T>();
    } catch (const json::exception& e) {
      throw UsageError("config '" + config_path + "': key '" + key + "': " + e.what());
    }
  }

  void resolve_all() {
    load_config();
    resolve("method", method);
    resolve("level", level);
    resolve("grid", grid);
    resolve("max_step", max_step);
    resolve("penalty", penalty);
    resolve("symmetrization", symmetrization);
    resolve("mode", mode);
    resolve("joints", joints);
    resolve("weights", weights);
    resolve("seed", seed);
    resolve("format", format);
    if (config.contains("parallel") && !given("no_parallel")) {
      bool parallel = true;
      resolve("parallel", parallel);
      no_parallel = !parallel;
    }
  }

  DistanceParams params() const {
    DistanceParams p;
    const auto m = parse_method(method);
    if (!m) throw UsageError("--method: unknown method '" + method + "' (srvt | srvt_dp | signature)");
    p.method = *m;
    if (level < 1 || level > kMaxTensorDepth) {
      throw UsageError("--level: must be in 1.." + std::to_string(kMaxTensorDepth));
    }
    p.signature.depth = level;
    if (mode == "full") {
      p.signature.mode = SignatureMode::FullCurve;
    } else if (mode == "per_joint") {
      p.signature.mode = SignatureMode::PerJoint;
    } else {
      throw UsageError("--mode: expected full | per_joint, got '" + mode + "'");
    }
    if (grid < 2) throw UsageError("--grid: must be at least 2");
    if (max_step < 1) throw UsageError("--max-step: must be at least 1");
    p.grid = DPGrid::square(grid, max_step);
    if (penalty < 0.0) throw UsageError("--penalty: must be nonnegative");
    p.dp.penalty = penalty;
    if (symmetrization == "min") {
      p.dp.symmetrization = Symmetrization::MinOfBoth;
    } else if (symmetrization == "one_sided") {
      p.dp.symmetrization = Symmetrization::OneSided;
    } else {
      throw UsageError("--symmetrization: expected min | one_sided, got '" + symmetrization + "'");
    }
    p.srvt.joint_weights = parse_weights(weights);
    return p;
  }

  void check_format() const {
    if (format != "csv" && format != "json") throw UsageError("--format: expected csv | json, got '" + format + "'");
  }

  void add_method_flags(CLI::App* app) {
    flags.emplace("method", app->add_option("--method", method, "srvt | srvt_dp | signature"));
    flags.emplace("level", app->add_option("--level", level, "signature truncation level N"));
    flags.emplace("grid", app->add_option("--grid", grid, "DP lattice size M"));
    flags.emplace("max_step", app->add_option("--max-step", max_step, "largest DP step in each coordinate"));
    flags.emplace("penalty", app->add_option("--penalty", penalty, "DP deviation penalty"));
    flags.emplace("symmetrization", app->add_option("--symmetrization", symmetrization, "min | one_sided"));
    flags.emplace("mode", app->add_option("--mode", mode, "signature features: full | per_joint"));
    flags.emplace("weights", app->add_option("--weights", weights, "SRVT joint weights w1,w2,..."));
  }
  void add_joints_flag(CLI::App* app) {
    flags.emplace("joints", app->add_option("--joints", joints, "joint subset a,b,c"));
  }
};

// Restrict a JSON clip to the named joints, in the given order.
PoseClip select_joints(const PoseClip& clip, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    const auto it = std::find(clip.joint_names.begin(), clip.joint_names.end(), n);
    if (it == clip.joint_names.end()) throw Error(ErrorCode::UnknownJoint, "clip '" + clip.id + "' has no joint '" + n + "'");
    idx.push_back(static_cast<std::size_t>(it - clip.joint_names.begin()));
  }
  PoseClip out = clip;
  out.joint_names = names;
  out.frames.clear();
  for (const auto& pose : clip.frames) {
    std::vector<Rotation> rs;
    for (auto i : idx) rs.push_back(pose[static_cast<int>(i)]);
    out.frames.emplace_back(std::move(rs));
  }
  return out;
}

LabeledDataset load_dataset(const std::string& path, const std::string& joints) {
  auto data = with_file(path, [&](const std::string& text) {
    auto d = read_dataset_json(text);
    if (!joints.empty()) {
      for (auto& c : d.clips) c = select_joints(c, split_list(joints));
    }
    for (const auto& c : d.clips) {
      if (c.joint_names.size() != d.clips.front().joint_names.size()) {
        throw Error(ErrorCode::JointCountMismatch, "clip '" + c.id + "' has a different joint count");
      }
    }
    return d;
  });
  if (data.clips.empty()) throw FileError(path, Error(ErrorCode::MalformedInput, "no clips"));
  return data;
}

struct Curves {
  std::vector<PiecewiseGeodesicCurve> curves;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
};

Curves to_curves(const LabeledDataset& data) {
  Curves out;
  for (const auto& c : data.clips) {
    out.curves.push_back(c.curve());
    out.ids.push_back(c.id);
    out.labels.push_back(c.label);
  }
  return out;
}

void emit(const std::string& out, const std::string& contents) {
  if (out.empty() || out == "-") {
    std::cout << contents;
  } else {
    write_file(out, contents);
  }
}

// Labels for the ids of a distance matrix: from a metadata JSON, a dataset
// JSON, or an "id,label" CSV.
std::vector<std::string> load_labels(const std::string& path, const std::vector<std::string>& ids) {
  return with_file(path, [&](const std::string& text) {
    std::map<std::string, std::string> by_id;
    if (fs::path(path).extension() == ".json") {
      try {
        const auto j = json::parse(text);
        if (j.contains("labels") && j.contains("ids")) {
          const auto l = j.at("labels").get<std::vector<std::string>>();
          const auto i = j.at("ids").get<std::vector<std::string>>();
          if (l.size() != i.size()) throw Error(ErrorCode::LabelMismatch, "ids and labels differ in length");
          for (std::size_t k = 0; k < i.size(); ++k) by_id[i[k]] = l[k];
        } else {
          for (const auto& c : read_dataset_json(text).clips) by_id[c.id] = c.label;
        }
      } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
      }
    } else {
      std::stringstream ss(text);
      std::string line;
      int number = 0;
      while (std::getline(ss, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (number == 1 && line.rfind("id,", 0) == 0)) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::MalformedInput, "expected 'id,label'", number);
        by_id[line.substr(0, comma)] = line.substr(comma + 1);
      }
    }
    std::vector<std::string> labels;
    for (const auto& id : ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw Error(ErrorCode::LabelMismatch, "no label for clip '" + id + "'");
      labels.push_back(it->second);
    }
    return labels;
  });
}

DistanceMatrix load_matrix(const std::string& path) {
  return with_file(path, [](const std::string& text) { return read_distance_csv(text); });
}

std::optional<std::vector<std::string>> labels_for(const std::string& labels_path, const std::string& matrix_path,
                                                   const std::vector<std::string>& ids) {
  if (!labels_path.empty()) return load_labels(labels_path, ids);
  const std::string sidecar = matrix_path + ".meta.json";
  if (fs::exists(sidecar)) return load_labels(sidecar, ids);
  return std::nullopt;
}

void print_summary(std::ostream& os, const LabeledDataset& data) {
  os << data.clips.size() << " clip(s)";
  if (!data.class_names.empty()) {
    os << ", classes:";
    for (const auto& c : data.class_names) os << " " << (c.empty() ? "(none)" : c);
  }
  os << "\n";
  for (const auto& c : data.clips) {
    os << "  " << c.id << "  label=" << (c.label.empty() ? "-" : c.label) << "  frames=" << c.frames.size()
       << "  joints=" << c.joint_names.size() << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Shape analysis of motion-capture clips on SO(3)^d"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings st;
  app.add_option("--config", st.config_path, "JSON file of defaults (flags take precedence)");

  std::string in, out, svg, labels_path, title, asf;
  std::vector<std::string> amcs, json_inputs;
  std::string label;
  int k = 1;
  std::string methods = "signature,srvt_dp";
  SynthSpec synth;
  bool no_warps = false;
  int trials = 10;

  auto* ingest = app.add_subcommand("ingest", "ASF+AMC or JSON clips to canonical clip JSON");
  ingest->add_option("--asf", asf, "skeleton file");
  ingest->add_option("--amc", amcs, "motion files, optionally as label=path")->expected(1, -1);
  ingest->add_option("--json", json_inputs, "clip JSON files")->expected(1, -1);
  ingest->add_option("--label", label, "label for inputs without one");
  ingest->add_option("--out", out, "output clip JSON (default stdout)");
  st.add_joints_flag(ingest);

  auto* synth_cmd = app.add_subcommand("synth", "synthetic labeled clips");
  st.flags.emplace("seed", synth_cmd->add_option("--seed", st.seed, "random seed"));
  synth_cmd->add_option("--classes", synth.classes, "class count");
  synth_cmd->add_option("--clips", synth.clips_per_class, "clips per class");
  synth_cmd->add_option("--joints", synth.joints, "joint count");
  synth_cmd->add_option("--frames", synth.frames, "frames per clip");
  synth_cmd->add_option("--noise", synth.noise, "rotation noise (radians)");
  synth_cmd->add_flag("--no-warps", no_warps, "sample every clip at its prototype times");
  synth_cmd->add_option("--out", out, "output clip JSON (default stdout)");

  auto* distmat = app.add_subcommand("distmat", "pairwise distance matrix");
  distmat->add_option("--in", in, "clip JSON")->required();
  distmat->add_option("--out", out, "output file (default stdout); metadata goes to <out>.meta.json");
  st.flags.emplace("format", distmat->add_option("--format", st.format, "csv | json"));
  st.flags.emplace("no_parallel", distmat->add_flag("--no-parallel", st.no_parallel, "single-threaded"));
  st.add_method_flags(distmat);
  st.add_joints_flag(distmat);

  auto* mds = app.add_subcommand("mds", "classical MDS of a distance CSV");
  mds->add_option("--in", in, "distance CSV")->required();
  mds->add_option("--out", out, "coordinates CSV (default stdout)");
  mds->add_option("--svg", svg, "scatter plot");
  mds->add_option("--labels", labels_path, "metadata JSON, clip JSON or id,label CSV (default <in>.meta.json)");
  mds->add_option("--title", title, "plot title");

  auto* classify = app.add_subcommand("classify", "leave-one-out k-NN accuracy and silhouette");
  classify->add_option("--in", in, "distance CSV")->required();
  classify->add_option("--labels", labels_path, "metadata JSON, clip JSON or id,label CSV (default <in>.meta.json)");
  classify->add_option("-k", k, "neighbours");

  auto* bench = app.add_subcommand("bench", "time distance matrices per method, single-threaded");
  bench->add_option("--in", in, "clip JSON (default: synthetic dataset)");
  bench->add_option("--methods", methods, "comma-separated methods");
  st.add_method_flags(bench);
  st.add_joints_flag(bench);

  auto* selftest = app.add_subcommand("selftest", "embedded property checks");
  selftest->add_option("--trials", trials, "random cases per check");
  st.flags.emplace("seed", selftest->add_option("--seed", st.seed, "random seed"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  st.resolve_all();

  if (ingest->parsed()) {
    LabeledDataset data;
    if (amcs.empty() == json_inputs.empty() && !(amcs.empty() && json_inputs.empty())) {
      throw UsageError("ingest: give either --asf/--amc or --json");
    }
    if (amcs.empty() && json_inputs.empty()) throw UsageError("ingest: --amc or --json required");
    const auto joint_list = split_list(st.joints);
    std::optional<std::vector<std::string>> joints;
    if (!joint_list.empty()) joints = joint_list;
    if (!amcs.empty()) {
      if (asf.empty()) throw UsageError("--amc: requires --asf");
      const auto skeleton = with_file(asf, [](const std::string& t) { return parse_asf(t); });
      for (const auto& spec : amcs) {
        std::string path = spec, clip_label = label;
        const auto eq = spec.find('=');
        if (eq != std::string::npos) {
          clip_label = spec.substr(0, eq);
          path = spec.substr(eq + 1);
        }
        const std::string id = fs::path(path).stem().string();
        data.clips.push_back(with_file(path, [&](const std::string& t) {
          auto clip = parse_amc(t, skeleton, id);
          clip.label = clip_label;
          return clip_to_pose_clip(clip, skeleton, joints);
        }));
      }
    } else {
      for (const auto& path : json_inputs) {
        for (auto& c : load_dataset(path, st.joints).clips) {
          if (c.label.empty()) c.label = label;
          data.clips.push_back(std::move(c));
        }
      }
    }
    for (const auto& c : data.clips) {
      if (std::find(data.class_names.begin(), data.class_names.end(), c.label) == data.class_names.end()) {
        data.class_names.push_back(c.label);
      }
    }
    emit(out, write_dataset_json(data));
    print_summary(out.empty() ? std::cerr : std::cout, data);
    return 0;
  }

  if (synth_cmd->parsed()) {
    synth.seed = st.seed;
    synth.warps = !no_warps;
    if (synth.classes < 1 || synth.clips_per_class < 1 || synth.joints < 1 || synth.frames < 3 || synth.noise < 0) {
      throw UsageError("synth: counts must be positive, --frames at least 3 and --noise nonnegative");
    }
    emit(out, write_dataset_json(synth_classes(synth)));
    return 0;
  }

  if (distmat->parsed()) {
    st.check_format();
    const auto params = st.params();
    const auto c = to_curves(load_dataset(in, st.joints));
    const auto d = distance_matrix(c.curves, params, c.ids, !st.no_parallel);
    emit(out, st.format == "csv" ? write_distance_csv(d) : write_distance_json(d));
    if (!out.empty() && out != "-") write_file(out + ".meta.json", write_metadata_json(d, params, c.labels));
    return 0;
  }

  if (mds->parsed()) {
    const auto d = load_matrix(in);
    const auto labels = labels_for(labels_path, in, d.ids);
    const auto e = classical_mds(d, 2);
    if (e.negative_mass > 0.05) {
      std::cerr << "note: " << format_double(e.negative_mass)
                << " of the spectrum is negative; the distances are far from Euclidean\n";
    }
    const std::vector<std::string> none;
    emit(out, write_coordinates_csv(d.ids, e.points, labels ? *labels : none));
    if (!svg.empty()) {
      write_file(svg, render_svg(d.ids, e.points, labels ? *labels : none, title.empty() ? in : title));
    }
    return 0;
  }

  if (classify->parsed()) {
    if (k < 1) throw UsageError("-k: must be at least 1");
    const auto d = load_matrix(in);
    const auto labels = labels_for(labels_path, in, d.ids);
    if (!labels) throw UsageError("--labels: required (no " + in + ".meta.json found)");
    const json result{{"n", d.size()},
                      {"k", k},
                      {"accuracy", loo_knn_accuracy(d.values, *labels, k)},
                      {"silhouette", silhouette(d.values, *labels)}};
    std::cout << result.dump(1) << "\n";
    return 0;
  }

  if (bench->parsed()) {
    auto params = st.params();
    const auto data = in.empty() ? synth_classes(SynthSpec{}) : load_dataset(in, st.joints);
    const auto c = to_curves(data);
    json times = json::object();
    for (const auto& name : split_list(methods)) {
      const auto m = parse_method(name);
      if (!m) throw UsageError("--methods: unknown method '" + name + "'");
      params.method = *m;
      times[name] = distance_matrix(c.curves, params, c.ids, false).build_seconds;
    }
    json result{{"clips", c.curves.size()}, {"seconds", times}};
    if (times.contains("signature") && times.contains("srvt_dp")) {
      result["ratio"] = times["srvt_dp"].get<double>() / times["signature"].get<double>();
    }
    std::cout << result.dump(1) << "\n";
    return 0;
  }

  if (selftest->parsed()) {
    if (trials < 1) throw UsageError("--trials: must be at least 1");
    bool ok = true;
    for (const auto& r : run_selftest(st.seed, trials)) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (worst " << format_double(r.worst) << ", tol "
                << format_double(r.tolerance) << ")\n";
      ok = ok && r.passed;
    }
    return ok ? 0 : 3;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_data_error(e.code) ? 2 : 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_data_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
