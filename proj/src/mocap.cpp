#include "sigshape/mocap.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "sigshape/error.hpp"

namespace sigshape {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.tokens.emplace_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double to_number(const std::string& token, int line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw Error(ErrorCode::MalformedInput, "not a number: '" + token + "'", line);
  return value;
}

bool is_integer(const std::string& token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); });
}

Channel parse_channel(const std::string& token, int line) {
  const std::string t = lower(token);
  if (t == "rx") return Channel::RX;
  if (t == "ry") return Channel::RY;
  if (t == "rz") return Channel::RZ;
  if (t == "tx") return Channel::TX;
  if (t == "ty") return Channel::TY;
  if (t == "tz") return Channel::TZ;
  if (t == "l") return Channel::L;
  throw Error(ErrorCode::UnknownDof, "unknown degree of freedom '" + token + "'", line);
}

bool valid_axis_order(const std::string& order) {
  std::string s = order;
  std::sort(s.begin(), s.end());
  return s == "XYZ";
}

Rotation elementary(char axis, double angle) {
  switch (axis) {
    case 'X': return exp_so3(AxisVector(angle, 0.0, 0.0));
    case 'Y': return exp_so3(AxisVector(0.0, angle, 0.0));
    default: return exp_so3(AxisVector(0.0, 0.0, angle));
  }
}

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::RX: return "rx";
    case Channel::RY: return "ry";
    case Channel::RZ: return "rz";
    case Channel::TX: return "tx";
    case Channel::TY: return "ty";
    case Channel::TZ: return "tz";
    case Channel::L: return "l";
  }
  return "?";
}

bool is_rotation(Channel c) { return c == Channel::RX || c == Channel::RY || c == Channel::RZ; }

int Joint::rotational_dofs() const {
  return static_cast<int>(std::count_if(dofs.begin(), dofs.end(), is_rotation));
}

Rotation Joint::axis_rotation() const {
  Rotation c = Rotation::Identity();
  for (int i = 0; i < 3; ++i) c = elementary(axis_order[static_cast<std::size_t>(i)], axis_angles[i]) * c;
  return c;
}

std::optional<int> Skeleton::find(std::string_view name) const {
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

Skeleton parse_asf(std::string_view text) {
  const auto lines = tokenize(text);
  Skeleton sk;
  Joint root;
  root.name = "root";
  bool have_root = false;
  bool have_hierarchy = false;
  std::vector<Joint> bones;
  std::vector<std::pair<std::string, std::vector<std::string>>> links;
  std::vector<int> link_lines;

  std::string section;
  std::optional<Joint> bone;
  bool in_hierarchy_block = false;

  for (const auto& line : lines) {
    const auto& tok = line.tokens;
    if (tok[0].front() == ':') {
      if (bone) throw Error(ErrorCode::MalformedInput, "bone block not closed with 'end'", line.number);
      section = lower(tok[0]);
      if (section == ":root") have_root = true;
      if (section == ":hierarchy") have_hierarchy = true;
      if (section == ":name" || section == ":version") section.clear();
      continue;
    }
    const std::string key = lower(tok[0]);
    if (section == ":units") {
      if (key == "angle" && tok.size() >= 2) {
        const std::string unit = lower(tok[1]);
        if (unit != "deg" && unit != "rad") {
          throw Error(ErrorCode::MalformedInput, "angle unit must be deg or rad", line.number);
        }
        sk.degrees = unit == "deg";
      } else if (key == "mass" && tok.size() >= 2) {
        sk.mass = to_number(tok[1], line.number);
      } else if (key == "length" && tok.size() >= 2) {
        sk.length = to_number(tok[1], line.number);
      }
    } else if (section == ":root") {
      if (key == "order") {
        root.dofs.clear();
        for (std::size_t i = 1; i < tok.size(); ++i) root.dofs.push_back(parse_channel(tok[i], line.number));
      } else if (key == "axis") {
        if (tok.size() != 2 || !valid_axis_order(tok[1])) {
          throw Error(ErrorCode::MalformedInput, "root axis must be a permutation of XYZ", line.number);
        }
        root.axis_order = tok[1];
      } else if (key == "orientation") {
        if (tok.size() != 4) throw Error(ErrorCode::MalformedInput, "orientation needs 3 angles", line.number);
        for (int i = 0; i < 3; ++i) root.axis_angles[i] = to_number(tok[static_cast<std::size_t>(i) + 1], line.number);
      }
    } else if (section == ":bonedata") {
      if (key == "begin") {
        if (bone) throw Error(ErrorCode::MalformedInput, "nested bone block", line.number);
        bone.emplace();
      } else if (key == "end") {
        if (!bone) throw Error(ErrorCode::MalformedInput, "'end' without 'begin'", line.number);
        if (bone->name.empty()) throw Error(ErrorCode::MalformedInput, "bone without a name", line.number);
        bones.push_back(std::move(*bone));
        bone.reset();
      } else if (bone) {
        if (key == "name" && tok.size() >= 2) {
          bone->name = tok[1];
        } else if (key == "dof") {
          for (std::size_t i = 1; i < tok.size(); ++i) bone->dofs.push_back(parse_channel(tok[i], line.number));
        } else if (key == "axis") {
          if (tok.size() != 5 || !valid_axis_order(tok[4])) {
            throw Error(ErrorCode::MalformedInput, "bone axis needs 3 angles and an order", line.number);
          }
          for (int i = 0; i < 3; ++i) bone->axis_angles[i] = to_number(tok[static_cast<std::size_t>(i) + 1], line.number);
          bone->axis_order = tok[4];
        }
        // id, direction, length, limits and their continuation lines are not needed.
      }
    } else if (section == ":hierarchy") {
      if (key == "begin") {
        in_hierarchy_block = true;
      } else if (key == "end") {
        in_hierarchy_block = false;
      } else if (in_hierarchy_block) {
        links.push_back({tok[0], {tok.begin() + 1, tok.end()}});
        link_lines.push_back(line.number);
      }
    }
  }
  if (bone) throw Error(ErrorCode::MalformedInput, "bone block not closed with 'end'", lines.back().number);
  if (!have_root) throw Error(ErrorCode::MissingSection, "missing :root section");
  if (!have_hierarchy) throw Error(ErrorCode::MissingSection, "missing :hierarchy section");

  sk.joints.push_back(std::move(root));
  for (auto& b : bones) {
    if (sk.find(b.name)) throw Error(ErrorCode::MalformedInput, "duplicate bone name '" + b.name + "'");
    sk.joints.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& [parent, children] = links[i];
    if (!sk.find(parent)) {
      throw Error(ErrorCode::DanglingParent, "hierarchy names unknown joint '" + parent + "'", link_lines[i]);
    }
    for (const auto& child : children) {
      const auto idx = sk.find(child);
      if (!idx || *idx == 0) {
        throw Error(ErrorCode::DanglingParent, "hierarchy names unknown child '" + child + "'", link_lines[i]);
      }
      sk.joints[static_cast<std::size_t>(*idx)].parent = parent;
    }
  }
  for (std::size_t i = 1; i < sk.joints.size(); ++i) {
    if (sk.joints[i].parent.empty()) {
      throw Error(ErrorCode::DanglingParent, "bone '" + sk.joints[i].name + "' has no parent in :hierarchy");
    }
  }
  if (sk.degrees) {
    for (auto& j : sk.joints) j.axis_angles *= kDegree;
  }
  return sk;
}

AnimationClip parse_amc(std::string_view text, const Skeleton& skeleton, std::string id) {
  AnimationClip clip;
  clip.id = std::move(id);
  const auto lines = tokenize(text);
  std::optional<long> last_index;
  std::vector<int> frame_joints;
  std::vector<std::string> seen;

  const auto close_frame = [&](int line) {
    if (clip.frames.empty()) return;
    if (clip.frames.size() == 1) {
      clip.joint_names = seen;
    } else if (seen != clip.joint_names) {
      throw Error(ErrorCode::MalformedInput,
                  "frame " + std::to_string(*last_index) + " does not list the same joints as the first frame", line);
    }
  };

  for (const auto& line : lines) {
    const auto& tok = line.tokens;
    if (tok[0].front() == ':') continue;
    if (tok.size() == 1 && is_integer(tok[0])) {
      close_frame(line.number);
      const long index = std::stol(tok[0]);
      if (last_index && index != *last_index + 1) {
        throw Error(ErrorCode::NonContiguousFrames,
                    "frame " + std::to_string(index) + " follows frame " + std::to_string(*last_index), line.number);
      }
      last_index = index;
      clip.frames.emplace_back();
      seen.clear();
      continue;
    }
    if (clip.frames.empty()) throw Error(ErrorCode::MalformedInput, "joint data before the first frame index", line.number);
    const auto idx = skeleton.find(tok[0]);
    if (!idx) throw Error(ErrorCode::UnknownJoint, "joint '" + tok[0] + "' is not in the skeleton", line.number);
    const Joint& joint = skeleton.joints[static_cast<std::size_t>(*idx)];
    if (tok.size() - 1 != joint.dofs.size()) {
      throw Error(ErrorCode::DofCountMismatch,
                  "joint '" + joint.name + "' has " + std::to_string(joint.dofs.size()) + " dofs but " +
                      std::to_string(tok.size() - 1) + " values",
                  line.number);
    }
    if (std::find(seen.begin(), seen.end(), joint.name) != seen.end()) {
      throw Error(ErrorCode::MalformedInput, "joint '" + joint.name + "' repeated within a frame", line.number);
    }
    std::vector<double> values;
    values.reserve(joint.dofs.size());
    for (std::size_t i = 0; i < joint.dofs.size(); ++i) {
      double v = to_number(tok[i + 1], line.number);
      if (skeleton.degrees && is_rotation(joint.dofs[i])) v *= kDegree;
      values.push_back(v);
    }
    seen.push_back(joint.name);
    clip.frames.back().push_back(std::move(values));
  }
  close_frame(lines.empty() ? 0 : lines.back().number);
  if (clip.frames.size() < 2) {
    throw Error(ErrorCode::TooFewFrames, "AMC data needs at least 2 frames, got " + std::to_string(clip.frames.size()));
  }
  return clip;
}

std::string write_asf(const Skeleton& skeleton) {
  std::ostringstream out;
  const double unit = skeleton.degrees ? 1.0 / kDegree : 1.0;
  out << ":version 1.10\n:name sigshape\n:units\n  mass " << format_number(skeleton.mass) << "\n  length "
      << format_number(skeleton.length) << "\n  angle " << (skeleton.degrees ? "deg" : "rad") << "\n";
  const Joint& root = skeleton.joints.front();
  out << ":root\n  order";
  for (auto c : root.dofs) {
    std::string s(to_string(c));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    out << ' ' << s;
  }
  out << "\n  axis " << root.axis_order << "\n  position 0 0 0\n  orientation";
  for (int i = 0; i < 3; ++i) out << ' ' << format_number(root.axis_angles[i] * unit);
  out << "\n:bonedata\n";
  for (std::size_t b = 1; b < skeleton.joints.size(); ++b) {
    const Joint& j = skeleton.joints[b];
    out << "  begin\n    id " << b << "\n    name " << j.name << "\n    axis";
    for (int i = 0; i < 3; ++i) out << ' ' << format_number(j.axis_angles[i] * unit);
    out << ' ' << j.axis_order << "\n";
    if (!j.dofs.empty()) {
      out << "    dof";
      for (auto c : j.dofs) out << ' ' << to_string(c);
      out << "\n";
    }
    out << "  end\n";
  }
  out << ":hierarchy\n  begin\n";
  for (const auto& parent : skeleton.joints) {
    std::vector<std::string> children;
    for (const auto& j : skeleton.joints) {
      if (j.parent == parent.name) children.push_back(j.name);
    }
    if (children.empty()) continue;
    out << "    " << parent.name;
    for (const auto& c : children) out << ' ' << c;
    out << "\n";
  }
  out << "  end\n";
  return out.str();
}

std::string write_amc(const AnimationClip& clip, const Skeleton& skeleton) {
  std::ostringstream out;
  out << ":FULLY-SPECIFIED\n" << (skeleton.degrees ? ":DEGREES\n" : "");
  for (std::size_t f = 0; f < clip.frames.size(); ++f) {
    out << f + 1 << "\n";
    for (std::size_t i = 0; i < clip.joint_names.size(); ++i) {
      const auto idx = skeleton.find(clip.joint_names[i]);
      if (!idx) throw Error(ErrorCode::UnknownJoint, "joint '" + clip.joint_names[i] + "' is not in the skeleton");
      const Joint& joint = skeleton.joints[static_cast<std::size_t>(*idx)];
      out << joint.name;
      for (std::size_t c = 0; c < joint.dofs.size(); ++c) {
        double v = clip.frames[f][i][c];
        if (skeleton.degrees && is_rotation(joint.dofs[c])) v /= kDegree;
        out << ' ' << format_number(v);
      }
      out << "\n";
    }
  }
  return out.str();
}

Rotation joint_rotation(const Joint& joint, std::span<const double> values) {
  Rotation m = Rotation::Identity();
  for (std::size_t c = 0; c < joint.dofs.size(); ++c) {
    switch (joint.dofs[c]) {
      case Channel::RX: m = elementary('X', values[c]) * m; break;
      case Channel::RY: m = elementary('Y', values[c]) * m; break;
      case Channel::RZ: m = elementary('Z', values[c]) * m; break;
      default: break;
    }
  }
  const Rotation axis = joint.axis_rotation();
  return reorthonormalize(axis * m * axis.transpose());
}

PoseClip clip_to_pose_clip(const AnimationClip& clip, const Skeleton& skeleton,
                           const std::optional<std::vector<std::string>>& joints) {
  std::vector<std::string> selected;
  if (joints) {
    selected = *joints;
  } else {
    for (const auto& j : skeleton.joints) {
      if (j.rotational_dofs() > 0 &&
          std::find(clip.joint_names.begin(), clip.joint_names.end(), j.name) != clip.joint_names.end()) {
        selected.push_back(j.name);
      }
    }
  }
  if (selected.empty()) throw Error(ErrorCode::UnknownJoint, "no joint with a rotational dof selected");

  std::vector<std::size_t> column;
  std::vector<const Joint*> defs;
  for (const auto& name : selected) {
    const auto idx = skeleton.find(name);
    const auto it = std::find(clip.joint_names.begin(), clip.joint_names.end(), name);
    if (!idx || it == clip.joint_names.end()) {
      throw Error(ErrorCode::UnknownJoint, "joint '" + name + "' is not present in the clip");
    }
    const Joint& j = skeleton.joints[static_cast<std::size_t>(*idx)];
    if (j.rotational_dofs() == 0) throw Error(ErrorCode::UnknownJoint, "joint '" + name + "' has no rotational dof");
    column.push_back(static_cast<std::size_t>(it - clip.joint_names.begin()));
    defs.push_back(&j);
  }

  PoseClip out;
  out.id = clip.id;
  out.label = clip.label;
  out.frame_rate = clip.frame_rate;
  out.joint_names = selected;
  out.frames.reserve(clip.frames.size());
  for (const auto& frame : clip.frames) {
    std::vector<Rotation> rs;
    rs.reserve(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i) rs.push_back(joint_rotation(*defs[i], frame[column[i]]));
    out.frames.emplace_back(std::move(rs));
  }
  return out;
}

PiecewiseGeodesicCurve clip_to_curve(const AnimationClip& clip, const Skeleton& skeleton,
                                     const std::optional<std::vector<std::string>>& joints) {
  return clip_to_pose_clip(clip, skeleton, joints).curve();
}

PiecewiseGeodesicCurve PoseClip::curve() const { return PiecewiseGeodesicCurve::from_frames(frames); }

std::vector<int> LabeledDataset::label_indices() const {
  std::vector<int> out;
  out.reserve(clips.size());
  for (const auto& clip : clips) {
    const auto it = std::find(class_names.begin(), class_names.end(), clip.label);
    if (it == class_names.end()) throw Error(ErrorCode::LabelMismatch, "clip '" + clip.id + "' has unknown label '" + clip.label + "'");
    out.push_back(static_cast<int>(it - class_names.begin()));
  }
  return out;
}

LabeledDataset synth_classes(const SynthSpec& spec) {
  if (spec.classes < 1 || spec.clips_per_class < 1 || spec.joints < 1 || spec.frames < 3 || spec.noise < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic dataset needs positive counts, >= 3 frames and noise >= 0");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto random_axis = [&] {
    AxisVector a(gauss(rng), gauss(rng), gauss(rng));
    return AxisVector(a.normalized());
  };

  // Prototype polygon: K segments, frames - 1 clip intervals in total. K stays
  // above twice the top harmonic where possible, so no program aliases into a
  // back-and-forth polygon.
  const int segments = std::min(spec.frames - 1, std::max({2, (spec.frames - 1) / 3, 4 * spec.classes + 1}));
  const int extra = spec.frames - 1 - segments;

  struct Harmonic {
    AxisVector axis;
    double amplitude;
    double phase;
    double frequency;
  };

  LabeledDataset data;
  for (int c = 0; c < spec.classes; ++c) {
    data.class_names.push_back("class" + std::to_string(c));
    std::vector<std::vector<Harmonic>> program(static_cast<std::size_t>(spec.joints));
    for (auto& joint : program) {
      const double base = 1.0 + c;
      joint.push_back({random_axis(), 0.3 + 0.6 * uniform(rng), 2.0 * std::numbers::pi * uniform(rng), base});
      joint.push_back({random_axis(), 0.1 + 0.2 * uniform(rng), 2.0 * std::numbers::pi * uniform(rng), 2.0 * base});
    }
    std::vector<Pose> prototype;
    for (int s = 0; s <= segments; ++s) {
      const double tau = static_cast<double>(s) / segments;
      std::vector<Rotation> rs;
      for (const auto& joint : program) {
        AxisVector v = AxisVector::Zero();
        for (const auto& h : joint) v += h.amplitude * std::sin(2.0 * std::numbers::pi * h.frequency * tau + h.phase) * h.axis;
        rs.push_back(exp_so3(v));
      }
      prototype.emplace_back(std::move(rs));
    }
    const auto proto = PiecewiseGeodesicCurve::from_frames(prototype);

    for (int k = 0; k < spec.clips_per_class; ++k) {
      // Remaining frames sit at w(u_i) for a monotone warp w(u) = u + a sin(2 pi u)/(2 pi) + b sin(4 pi u)/(4 pi).
      double a = 0.0;
      double b = 0.0;
      if (spec.warps) {
        a = 1.6 * uniform(rng) - 0.8;
        b = (0.9 - std::abs(a)) * (2.0 * uniform(rng) - 1.0);
      }
      std::vector<double> times;
      for (int s = 0; s <= segments; ++s) times.push_back(static_cast<double>(s) / segments);
      for (int i = 0; i < extra; ++i) {
        const double u = (i + 0.5) / extra;
        times.push_back(u + a * std::sin(2.0 * std::numbers::pi * u) / (2.0 * std::numbers::pi) +
                        b * std::sin(4.0 * std::numbers::pi * u) / (4.0 * std::numbers::pi));
      }
      std::sort(times.begin(), times.end());

      PoseClip clip;
      clip.id = "c" + std::to_string(c) + "_" + std::to_string(k);
      clip.label = data.class_names.back();
      for (int j = 0; j < spec.joints; ++j) clip.joint_names.push_back("joint" + std::to_string(j));
      for (double t : times) {
        Pose p = proto.evaluate(std::clamp(t, 0.0, 1.0));
        if (spec.noise > 0.0) {
          for (int j = 0; j < p.joint_count(); ++j) {
            const AxisVector xi(gauss(rng), gauss(rng), gauss(rng));
            p[j] = reorthonormalize(exp_so3(spec.noise * xi) * p[j]);
          }
        }
        clip.frames.push_back(std::move(p));
      }
      data.clips.push_back(std::move(clip));
    }
  }
  return data;
}

}  // namespace sigshape
