#include "sigshape/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sigshape/error.hpp"

namespace sigshape {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

json clip_to_json(const PoseClip& clip) {
  json frames = json::array();
  for (const auto& pose : clip.frames) {
    json f = json::array();
    for (const auto& r : pose.joints()) {
      const AxisVector v = log_so3(r);
      f.push_back({v.x(), v.y(), v.z()});
    }
    frames.push_back(std::move(f));
  }
  return {{"id", clip.id}, {"label", clip.label}, {"frame_rate", clip.frame_rate},
          {"joints", clip.joint_names}, {"frames", std::move(frames)}};
}

PoseClip clip_from_json(const json& j) {
  PoseClip clip;
  clip.id = j.at("id").get<std::string>();
  clip.label = j.value("label", std::string());
  clip.frame_rate = j.value("frame_rate", 120.0);
  clip.joint_names = j.at("joints").get<std::vector<std::string>>();
  for (const auto& f : j.at("frames")) {
    if (f.size() != clip.joint_names.size()) {
      throw Error(ErrorCode::JointCountMismatch, "clip '" + clip.id + "': frame with " + std::to_string(f.size()) +
                                                     " joints, expected " + std::to_string(clip.joint_names.size()));
    }
    std::vector<Rotation> rs;
    for (const auto& v : f) {
      if (v.size() != 3) throw Error(ErrorCode::MalformedInput, "clip '" + clip.id + "': axis-angle needs 3 numbers");
      rs.push_back(exp_so3(AxisVector(v[0].get<double>(), v[1].get<double>(), v[2].get<double>())));
    }
    clip.frames.emplace_back(std::move(rs));
  }
  if (clip.frames.size() < 2) throw Error(ErrorCode::TooFewFrames, "clip '" + clip.id + "' has fewer than 2 frames");
  return clip;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    std::string cell(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(std::move(cell));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_cell(const std::string& cell, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::MalformedInput, "not a number: '" + cell + "'", line);
  }
  return v;
}

}  // namespace

std::string write_dataset_json(const LabeledDataset& data) {
  json clips = json::array();
  for (const auto& c : data.clips) clips.push_back(clip_to_json(c));
  const json doc{{"classes", data.class_names}, {"clips", std::move(clips)}};
  return doc.dump(1) + "\n";
}

LabeledDataset read_dataset_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  LabeledDataset data;
  try {
    const json* clips = nullptr;
    json single = json::array();
    if (doc.is_array()) {
      clips = &doc;
    } else if (doc.contains("clips")) {
      clips = &doc.at("clips");
    } else {
      single.push_back(doc);
      clips = &single;
    }
    for (const auto& c : *clips) data.clips.push_back(clip_from_json(c));
    if (doc.is_object() && doc.contains("classes")) {
      data.class_names = doc.at("classes").get<std::vector<std::string>>();
    } else {
      for (const auto& c : data.clips) {
        if (std::find(data.class_names.begin(), data.class_names.end(), c.label) == data.class_names.end()) {
          data.class_names.push_back(c.label);
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  return data;
}

std::string write_distance_csv(const DistanceMatrix& d) {
  std::string out = "id";
  for (const auto& id : d.ids) out += "," + id;
  out += "\n";
  for (int i = 0; i < d.size(); ++i) {
    out += d.ids[static_cast<std::size_t>(i)];
    for (int j = 0; j < d.size(); ++j) out += "," + format_double(d.values(i, j));
    out += "\n";
  }
  return out;
}

DistanceMatrix read_distance_csv(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    ++number;
    const auto line = text.substr(pos, end - pos);
    if (line.find_first_not_of(" \r\t") != std::string_view::npos) lines.emplace_back(number, line);
    pos = end + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::MalformedInput, "empty distance file", 1);
  auto header = split_csv(lines[0].second);
  if (header.empty() || header[0] != "id") throw Error(ErrorCode::MalformedInput, "header must start with 'id'", lines[0].first);
  const std::size_t n = header.size() - 1;
  if (lines.size() != n + 1) {
    throw Error(ErrorCode::MalformedInput,
                "expected " + std::to_string(n) + " rows, found " + std::to_string(lines.size() - 1), lines.back().first);
  }
  DistanceMatrix d;
  d.ids.assign(header.begin() + 1, header.end());
  d.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto [line_no, line] = lines[i + 1];
    const auto cells = split_csv(line);
    if (cells.size() != n + 1) throw Error(ErrorCode::MalformedInput, "ragged row", line_no);
    if (cells[0] != d.ids[i]) throw Error(ErrorCode::MalformedInput, "row id '" + cells[0] + "' does not match header", line_no);
    for (std::size_t j = 0; j < n; ++j) {
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_cell(cells[j + 1], line_no);
    }
  }
  for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
    if (d.values(i, i) != 0.0) throw Error(ErrorCode::MalformedInput, "nonzero diagonal entry", lines[static_cast<std::size_t>(i) + 1].first);
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(d.values(i, j) - d.values(j, i)) > 1e-12 || d.values(i, j) < 0.0) {
        throw Error(ErrorCode::MalformedInput, "matrix is not symmetric and nonnegative",
                    lines[static_cast<std::size_t>(i) + 1].first);
      }
    }
  }
  return d;
}

std::string write_coordinates_csv(std::span<const std::string> ids, const Eigen::MatrixXd& points,
                                  std::span<const std::string> labels) {
  std::string out = "id";
  const char* axes[] = {"x", "y", "z"};
  for (Eigen::Index a = 0; a < points.cols(); ++a) {
    out += ",";
    out += a < 3 ? std::string(axes[a]) : "x" + std::to_string(a + 1);
  }
  if (!labels.empty()) out += ",label";
  out += "\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out += ids[static_cast<std::size_t>(i)];
    for (Eigen::Index a = 0; a < points.cols(); ++a) out += "," + format_double(points(i, a));
    if (!labels.empty()) out += "," + labels[static_cast<std::size_t>(i)];
    out += "\n";
  }
  return out;
}

std::string write_distance_json(const DistanceMatrix& d) {
  json rows = json::array();
  for (int i = 0; i < d.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < d.size(); ++j) row.push_back(d.values(i, j));
    rows.push_back(std::move(row));
  }
  const json doc{{"method", std::string(to_string(d.method))}, {"ids", d.ids}, {"matrix", std::move(rows)}};
  return doc.dump(1) + "\n";
}

std::string write_metadata_json(const DistanceMatrix& d, const DistanceParams& params,
                                std::span<const std::string> labels) {
  json p;
  switch (params.method) {
    case Method::Signature:
      p["level"] = params.signature.depth;
      p["mode"] = params.signature.mode == SignatureMode::FullCurve ? "full" : "per_joint";
      break;
    case Method::SrvtDp: {
      p["grid"] = params.grid.size();
      int max_step = 0;
      for (const auto& s : params.grid.steps()) max_step = std::max({max_step, s.di, s.dj});
      p["max_step"] = max_step;
      p["penalty"] = params.dp.penalty;
      p["symmetrization"] = params.dp.symmetrization == Symmetrization::MinOfBoth ? "min" : "one_sided";
      break;
    }
    case Method::Srvt: break;
  }
  if (params.method != Method::Signature && !params.srvt.joint_weights.empty()) {
    p["joint_weights"] = params.srvt.joint_weights;
  }
  const json doc{{"method", std::string(to_string(d.method))},
                 {"params", std::move(p)},
                 {"build_seconds", d.build_seconds},
                 {"ids", d.ids},
                 {"labels", std::vector<std::string>(labels.begin(), labels.end())}};
  return doc.dump(1) + "\n";
}

std::string render_svg(std::span<const std::string> ids, const Eigen::MatrixXd& points,
                       std::span<const std::string> labels, std::string_view title) {
  constexpr double width = 640.0;
  constexpr double height = 480.0;
  constexpr double margin = 50.0;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const Eigen::Index n = points.rows();
  const auto xs = points.col(0);
  const Eigen::VectorXd ys = points.cols() > 1 ? Eigen::VectorXd(points.col(1)) : Eigen::VectorXd::Zero(n);
  const double xmin = xs.minCoeff(), xmax = xs.maxCoeff();
  const double ymin = ys.minCoeff(), ymax = ys.maxCoeff();
  const double sx = (width - 2 * margin - 120) / std::max(xmax - xmin, 1e-12);
  const double sy = (height - 2 * margin) / std::max(ymax - ymin, 1e-12);

  std::vector<std::string> classes;
  for (const auto& l : labels) {
    if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
  }
  const auto colour = [&](std::size_t i) -> const char* {
    if (labels.empty()) return palette[0];
    const auto k = std::find(classes.begin(), classes.end(), labels[i]) - classes.begin();
    return palette[static_cast<std::size_t>(k) % 10];
  };
  const auto escape = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape(title) << "</text>\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const double px = margin + (xs[i] - xmin) * sx;
    const double py = height - margin - (ys[i] - ymin) * sy;
    svg << "<circle cx=\"" << format_double(px) << "\" cy=\"" << format_double(py) << "\" r=\"5\" fill=\""
        << colour(static_cast<std::size_t>(i)) << "\"><title>" << escape(ids[static_cast<std::size_t>(i)])
        << "</title></circle>\n";
  }
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const double y = margin + 20.0 * static_cast<double>(k);
    svg << "<rect x=\"" << width - 150 << "\" y=\"" << y - 10 << "\" width=\"12\" height=\"12\" fill=\""
        << palette[k % 10] << "\"/>";
    svg << "<text x=\"" << width - 132 << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(classes[k]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MalformedInput, "cannot write '" + path + "'");
  out << contents;
}

}  // namespace sigshape
