#pragma once

// File formats used by the command-line tool.
//
//   clip JSON      {"id", "label", "frame_rate", "joints": [names],
//                   "frames": [[[x, y, z] per joint] per frame]}  (axis-angle, radians)
//   dataset JSON   {"classes": [names], "clips": [clip, ...]}; a bare clip or
//                  an array of clips is accepted on input
//   distance CSV   "id,<id_1>,...,<id_n>" then one "<id_i>,d_i1,...,d_in" row per clip
//   coords CSV     "id,x,y[,label]"
//
// Numbers are written in shortest round-trip form.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sigshape/analysis.hpp"
#include "sigshape/mocap.hpp"

namespace sigshape {

std::string format_double(double x);

std::string write_dataset_json(const LabeledDataset& data);
LabeledDataset read_dataset_json(std::string_view text);

std::string write_distance_csv(const DistanceMatrix& d);
/// Throws MalformedInput (with line number) on ragged rows, bad numbers, or an
/// asymmetric / nonzero-diagonal matrix.
DistanceMatrix read_distance_csv(std::string_view text);

std::string write_coordinates_csv(std::span<const std::string> ids, const Eigen::MatrixXd& points,
                                  std::span<const std::string> labels = {});

std::string write_distance_json(const DistanceMatrix& d);

/// Sidecar metadata for a distance matrix: method, parameters, build time, ids, labels.
std::string write_metadata_json(const DistanceMatrix& d, const DistanceParams& params,
                                std::span<const std::string> labels);

/// Flat 2-D scatter with one colour per label and a legend.
std::string render_svg(std::span<const std::string> ids, const Eigen::MatrixXd& points,
                       std::span<const std::string> labels, std::string_view title);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace sigshape
