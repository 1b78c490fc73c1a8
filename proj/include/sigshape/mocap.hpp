#pragma once

// CMU-style ASF/AMC ingestion and a synthetic labeled dataset generator.
//
// Joint rotation convention. For a joint with ASF axis angles (a1, a2, a3) in
// order "XYZ" and dof line "rx ry rz", an AMC record (x, y, z) gives
//
//   C = Rz(a3) Ry(a2) Rx(a1)          (axis pre-rotation)
//   M = Rz(z)  Ry(y)  Rx(x)           (first listed dof acts first)
//   R = C M C^T
//
// so zero angles always give the identity, whatever the axis. Other orders
// permute the factors the same way (the first listed axis is rightmost).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigshape/curve.hpp"
#include "sigshape/lie.hpp"

namespace sigshape {

enum class Channel { RX, RY, RZ, TX, TY, TZ, L };

std::string_view to_string(Channel c);
bool is_rotation(Channel c);

struct Joint {
  std::string name;
  std::vector<Channel> dofs;
  /// Axis pre-rotation angles in radians, listed in axis_order.
  AxisVector axis_angles = AxisVector::Zero();
  std::string axis_order = "XYZ";
  /// Empty for the root.
  std::string parent;

  int rotational_dofs() const;
  /// C in the convention above.
  Rotation axis_rotation() const;
};

struct Skeleton {
  /// Root first, then bones in file order.
  std::vector<Joint> joints;
  /// Angle unit of the files (internally everything is radians).
  bool degrees = true;
  double mass = 1.0;
  double length = 1.0;

  std::optional<int> find(std::string_view name) const;
};

struct AnimationClip {
  std::string id;
  double frame_rate = 120.0;
  std::string label;
  /// Joints present in every frame, in first-frame order.
  std::vector<std::string> joint_names;
  /// frames[f][i] holds the channel values of joint_names[i]; rotations in radians.
  std::vector<std::vector<std::vector<double>>> frames;
};

/// A clip after Euler composition: one Pose per frame. Also the JSON
/// interchange record.
struct PoseClip {
  std::string id;
  std::string label;
  double frame_rate = 120.0;
  std::vector<std::string> joint_names;
  std::vector<Pose> frames;

  /// Uniform knots on [0,1].
  PiecewiseGeodesicCurve curve() const;
};

struct LabeledDataset {
  std::vector<PoseClip> clips;
  std::vector<std::string> class_names;

  /// Index into class_names per clip; throws LabelMismatch for unknown labels.
  std::vector<int> label_indices() const;
};

Skeleton parse_asf(std::string_view text);
AnimationClip parse_amc(std::string_view text, const Skeleton& skeleton, std::string id = "clip");

std::string write_asf(const Skeleton& skeleton);
std::string write_amc(const AnimationClip& clip, const Skeleton& skeleton);

/// Rotation of one joint from its channel values (translations and length ignored).
Rotation joint_rotation(const Joint& joint, std::span<const double> values);

/// Poses of the selected joints (default: every clip joint with a rotational
/// dof, in skeleton order). Throws UnknownJoint.
PoseClip clip_to_pose_clip(const AnimationClip& clip, const Skeleton& skeleton,
                           const std::optional<std::vector<std::string>>& joints = std::nullopt);
PiecewiseGeodesicCurve clip_to_curve(const AnimationClip& clip, const Skeleton& skeleton,
                                     const std::optional<std::vector<std::string>>& joints = std::nullopt);

struct SynthSpec {
  std::uint64_t seed = 1;
  int classes = 3;
  int clips_per_class = 10;
  int joints = 5;
  int frames = 60;
  /// Standard deviation (radians) of the per-frame, per-joint rotation noise.
  double noise = 0.0;
  /// Per-clip random time warps; without them every clip of a class samples
  /// its prototype at the same times.
  bool warps = true;
};

/// Class c follows its own angular program (fundamental frequency c+1 with a
/// second harmonic, random axes, amplitudes and phases per joint) sampled on a
/// coarse prototype polygon. Each clip revisits every prototype vertex and
/// inserts the remaining frames along the prototype geodesics at warped
/// positions, so with noise 0 a clip is an exact reparameterization of its
/// class prototype.
LabeledDataset synth_classes(const SynthSpec& spec);

}  // namespace sigshape
