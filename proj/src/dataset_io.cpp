#include "roadhazard/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "json.hpp"
#include "roadhazard/error.hpp"
#include "roadhazard/random.hpp"

namespace roadhazard {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (sep == ' ') {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool to_number(std::string_view tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_input(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) raise(Errc::Io, fmt::format("cannot open {} {}", what, path.string()));
  return in;
}

std::ofstream open_output(const fs::path& path, const char* what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::Io, fmt::format("cannot write {} {}", what, path.string()));
  return out;
}

ImageId image_id_from_stem(const fs::path& file) {
  const std::string stem = file.stem().string();
  long long id = 0;
  if (!to_number(std::string_view(stem), id) || id < 0)
    raise(Errc::Parse, fmt::format("{}: annotation file names must be <image id>.txt", file.string()));
  return id;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<GroundTruthBox> parse_annotations(std::istream& in, const std::string& name, ImageId image_id,
                                              FrameSize size) {
  if (size.width <= 0 || size.height <= 0) raise(Errc::Config, name + ": image size must be positive");
  std::vector<GroundTruthBox> boxes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto tok = split(t, ' ');
    if (tok.size() != 5) raise(Errc::Parse, fmt::format("{}:{}: expected `category_id xc yc w h`", name, line_no));
    long long cat = 0;
    if (!to_number(tok[0], cat)) raise(Errc::Parse, fmt::format("{}:{}: bad category id", name, line_no));
    const auto category = category_from_id(cat);
    if (!category) raise(Errc::Category, fmt::format("{}:{}: category id {} outside 0-5", name, line_no, cat));
    double v[4];
    for (int i = 0; i < 4; ++i) {
      if (!to_number(tok[1 + i], v[i])) raise(Errc::Parse, fmt::format("{}:{}: bad coordinate", name, line_no));
      if (!(v[i] >= 0.0 && v[i] <= 1.0))
        raise(Errc::Range, fmt::format("{}:{}: normalized coordinate {} outside [0, 1]", name, line_no, v[i]));
    }
    const double w = size.width;
    const double h = size.height;
    BBox box{(v[0] - v[2] / 2) * w, (v[1] - v[3] / 2) * h, (v[0] + v[2] / 2) * w, (v[1] + v[3] / 2) * h};
    box = clamp_to_frame(box, size);
    if (!box.valid()) raise(Errc::Range, fmt::format("{}:{}: box has zero area inside the image", name, line_no));
    boxes.push_back({image_id, box, *category});
  }
  return boxes;
}

AnnotationSet load_annotations(const fs::path& dir, FrameSize default_size, const ImageSizes& sizes) {
  if (!fs::is_directory(dir)) raise(Errc::Io, "annotation directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());

  AnnotationSet set;
  std::vector<std::pair<ImageId, fs::path>> ordered;
  for (const auto& f : files) ordered.emplace_back(image_id_from_stem(f), f);
  std::sort(ordered.begin(), ordered.end());
  for (std::size_t i = 1; i < ordered.size(); ++i)
    if (ordered[i].first == ordered[i - 1].first)
      raise(Errc::Parse, fmt::format("duplicate annotation files for image {}", ordered[i].first));

  for (const auto& [id, file] : ordered) {
    auto it = sizes.find(id);
    const FrameSize size = it == sizes.end() ? default_size : it->second;
    auto in = open_input(file, "annotation file");
    auto boxes = parse_annotations(in, file.string(), id, size);
    set.boxes.insert(set.boxes.end(), boxes.begin(), boxes.end());
    set.image_ids.push_back(id);
  }
  return set;
}

void write_annotations(const fs::path& dir, const AnnotationSet& set, FrameSize default_size, const ImageSizes& sizes) {
  fs::create_directories(dir);
  std::map<ImageId, std::vector<const GroundTruthBox*>> by_image;
  for (ImageId id : set.image_ids) by_image[id];
  for (const auto& b : set.boxes) by_image[b.image_id].push_back(&b);
  for (const auto& [id, boxes] : by_image) {
    auto it = sizes.find(id);
    const FrameSize size = it == sizes.end() ? default_size : it->second;
    const double w = size.width;
    const double h = size.height;
    auto out = open_output(dir / fmt::format("{}.txt", id), "annotation file");
    for (const auto* b : boxes) {
      const auto& r = b->bbox;
      out << fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f}\n", category_id(b->category), (r.x1 + r.x2) / 2 / w,
                         (r.y1 + r.y2) / 2 / h, r.width() / w, r.height() / h);
    }
  }
}

// ---------------------------------------------------------------------------

DepthFrame load_depth_frame(const fs::path& path, double depth_scale, FrameId frame_id) {
  if (!(depth_scale > 0.0)) raise(Errc::Config, "depth_scale must be positive");
  if (!fs::exists(path)) raise(Errc::Io, "depth frame not found: " + path.string());
  const cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) raise(Errc::Format, "cannot decode depth frame " + path.string());
  if (img.type() != CV_16UC1)
    raise(Errc::Format, fmt::format("{}: depth frames must be 16-bit single-channel", path.string()));
  DepthFrame frame(img.cols, img.rows, depth_scale, frame_id);
  for (int v = 0; v < img.rows; ++v) {
    const auto* row = img.ptr<std::uint16_t>(v);
    std::copy(row, row + img.cols, frame.values.begin() + static_cast<std::ptrdiff_t>(v) * img.cols);
  }
  return frame;
}

void save_depth_frame(const fs::path& path, const DepthFrame& frame) {
  frame.validate();
  cv::Mat img(frame.height, frame.width, CV_16UC1, const_cast<std::uint16_t*>(frame.values.data()));
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), img);
  } catch (const cv::Exception& e) {
    raise(Errc::Io, fmt::format("cannot write depth frame {}: {}", path.string(), e.what()));
  }
  if (!ok) raise(Errc::Io, "cannot write depth frame " + path.string());
}

// ---------------------------------------------------------------------------

std::vector<AccelSample> parse_imu_log(std::istream& in, const std::string& name) {
  std::vector<AccelSample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (!header_seen) {
      header_seen = true;
      double probe = 0.0;
      if (!to_number(fields.front(), probe)) continue;  // header row
    }
    if (fields.size() != 4) raise(Errc::Parse, fmt::format("{}:{}: expected `t,ax,ay,az`", name, line_no));
    double v[4];
    for (int i = 0; i < 4; ++i)
      if (!to_number(fields[i], v[i]) || !std::isfinite(v[i]))
        raise(Errc::Parse, fmt::format("{}:{}: bad number `{}`", name, line_no, fields[i]));
    if (!samples.empty() && !(v[0] > samples.back().t))
      raise(Errc::Order, fmt::format("{}:{}: timestamp {} does not increase", name, line_no, v[0]));
    samples.push_back({v[0], v[1], v[2], v[3]});
  }
  return samples;
}

std::vector<AccelSample> load_imu_log(const fs::path& path) {
  auto in = open_input(path, "IMU log");
  return parse_imu_log(in, path.string());
}

void write_imu_log(const fs::path& path, const std::vector<AccelSample>& samples) {
  auto out = open_output(path, "IMU log");
  out << "t,ax,ay,az\n";
  for (const auto& s : samples) out << fmt::format("{},{},{},{}\n", s.t, s.ax, s.ay, s.az);
}

// ---------------------------------------------------------------------------

Calibration parse_calibration(std::istream& in, const std::string& name) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) raise(Errc::Parse, fmt::format("{}:{}: expected `key = value`", name, line_no));
    kv[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }

  const auto numbers = [&](const std::string& key, std::size_t count, bool required) {
    std::vector<double> out;
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) raise(Errc::Parse, fmt::format("{}: missing key `{}`", name, key));
      return out;
    }
    for (auto tok : split(it->second, ' ')) {
      double v = 0.0;
      if (!to_number(tok, v) || !std::isfinite(v)) raise(Errc::Parse, fmt::format("{}: bad value for `{}`", name, key));
      out.push_back(v);
    }
    if (count && out.size() != count)
      raise(Errc::Parse, fmt::format("{}: `{}` needs {} value(s), got {}", name, key, count, out.size()));
    return out;
  };
  const auto scalar = [&](const std::string& key) { return numbers(key, 1, true).front(); };
  const auto stream = [&](const std::string& prefix) {
    Intrinsics intr;
    const double w = scalar(prefix + ".width");
    const double h = scalar(prefix + ".height");
    if (w != std::floor(w) || h != std::floor(h)) raise(Errc::Parse, name + ": image sizes must be integers");
    intr.width = static_cast<int>(w);
    intr.height = static_cast<int>(h);
    intr.fx = scalar(prefix + ".fx");
    intr.fy = scalar(prefix + ".fy");
    intr.cx = scalar(prefix + ".cx");
    intr.cy = scalar(prefix + ".cy");
    for (double c : numbers(prefix + ".coeffs", 0, false))
      if (c != 0.0) raise(Errc::Config, name + ": lens distortion coefficients must be zero");
    intr.validate();
    return intr;
  };

  Calibration calib;
  calib.depth = stream("depth");
  calib.color = stream("color");
  const auto ext = numbers("extrinsics", 12, true);
  std::copy(ext.begin(), ext.begin() + 9, calib.depth_to_color.rotation.begin());
  std::copy(ext.begin() + 9, ext.end(), calib.depth_to_color.translation.begin());
  calib.depth_to_color.validate();
  if (kv.count("depth_scale")) calib.depth_scale = scalar("depth_scale");
  if (!(calib.depth_scale > 0.0)) raise(Errc::Config, name + ": depth_scale must be positive");
  return calib;
}

Calibration load_calibration(const fs::path& path) {
  auto in = open_input(path, "calibration");
  return parse_calibration(in, path.string());
}

void save_calibration(const fs::path& path, const Calibration& calib) {
  auto out = open_output(path, "calibration");
  for (const auto& [prefix, intr] : {std::pair{"depth", &calib.depth}, std::pair{"color", &calib.color}}) {
    out << fmt::format("{0}.width = {1}\n{0}.height = {2}\n{0}.fx = {3}\n{0}.fy = {4}\n{0}.cx = {5}\n{0}.cy = {6}\n",
                       prefix, intr->width, intr->height, intr->fx, intr->fy, intr->cx, intr->cy);
  }
  const auto& r = calib.depth_to_color.rotation;
  const auto& t = calib.depth_to_color.translation;
  out << fmt::format("extrinsics = {} {} {} {} {} {} {} {} {} {} {} {}\n", r[0], r[1], r[2], r[3], r[4], r[5], r[6],
                     r[7], r[8], t[0], t[1], t[2]);
  out << fmt::format("depth_scale = {}\n", calib.depth_scale);
}

// ---------------------------------------------------------------------------

ReplayManifest load_manifest(const fs::path& path) {
  auto in = open_input(path, "manifest");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::Parse, fmt::format("{}: {}", path.string(), e.what()));
  }
  const fs::path base = path.parent_path();
  const auto resolve = [&](const std::string& p) {
    fs::path rel(p);
    return rel.is_absolute() ? rel : base / rel;
  };
  const auto require_file = [&](const fs::path& p) {
    if (!fs::is_regular_file(p)) raise(Errc::Io, fmt::format("{}: referenced file missing: {}", path.string(), p.string()));
    return p;
  };

  ReplayManifest m;
  try {
    m.calibration = require_file(resolve(j.at("calibration").get<std::string>()));
    if (j.contains("detections") && !j["detections"].is_null())
      m.detections = require_file(resolve(j["detections"].get<std::string>()));
    if (j.contains("imu") && !j["imu"].is_null()) m.imu_log = require_file(resolve(j["imu"].get<std::string>()));
    m.aligned = j.value("aligned", false);
    for (const auto& f : j.at("frames")) {
      ManifestFrame frame;
      frame.frame_id = f.at("frame_id").get<FrameId>();
      frame.timestamp = f.value("timestamp", 0.0);
      frame.color = require_file(resolve(f.at("color").get<std::string>()));
      frame.depth = require_file(resolve(f.at("depth").get<std::string>()));
      if (!m.frames.empty() && frame.frame_id <= m.frames.back().frame_id)
        raise(Errc::Parse, fmt::format("{}: frame ids must strictly increase", path.string()));
      m.frames.push_back(std::move(frame));
    }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::Parse, fmt::format("{}: {}", path.string(), e.what()));
  }
  return m;
}

void save_manifest(const fs::path& path, const ReplayManifest& m) {
  const fs::path base = path.parent_path();
  // Relative inputs are taken as already relative to the manifest.
  const auto rel = [&](const fs::path& p) {
    if (p.is_relative()) return p.generic_string();
    return fs::relative(p, fs::absolute(base.empty() ? fs::path(".") : base)).generic_string();
  };
  nlohmann::ordered_json j;
  j["calibration"] = rel(m.calibration);
  if (m.detections) j["detections"] = rel(*m.detections);
  if (m.imu_log) j["imu"] = rel(*m.imu_log);
  j["aligned"] = m.aligned;
  auto& frames = j["frames"] = nlohmann::ordered_json::array();
  for (const auto& f : m.frames) {
    frames.push_back({{"frame_id", f.frame_id}, {"timestamp", f.timestamp}, {"color", rel(f.color)},
                      {"depth", rel(f.depth)}});
  }
  auto out = open_output(path, "manifest");
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

void verify_category_map(const fs::path& path) {
  auto in = open_input(path, "category map");
  std::array<bool, kCategoryCount> seen{};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tok = split(t, ' ');
    long long id = 0;
    if (tok.size() != 2 || !to_number(tok[0], id))
      raise(Errc::Parse, fmt::format("{}:{}: expected `<id> <name>`", path.string(), line_no));
    const auto by_id = category_from_id(id);
    const auto by_name = category_from_name(tok[1]);
    if (!by_id || !by_name || *by_id != *by_name)
      raise(Errc::Category, fmt::format("{}:{}: `{} {}` disagrees with the built-in category map", path.string(),
                                        line_no, id, tok[1]));
    if (seen[category_index(*by_id)])
      raise(Errc::Category, fmt::format("{}:{}: category {} listed twice", path.string(), line_no, id));
    seen[category_index(*by_id)] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    raise(Errc::Category, path.string() + ": category map is incomplete");
}

// ---------------------------------------------------------------------------

SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios) {
  const double r[3] = {ratios.train, ratios.val, ratios.test};
  for (double v : r)
    if (!(v > 0.0) || !std::isfinite(v)) raise(Errc::Config, "split ratios must be positive");
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) raise(Errc::Config, "split ratios must sum to 1");

  std::size_t size[3];
  double frac[3];
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * r[i];
    // 1e-9 absorbs representation error such as 10 * 0.7 = 6.999...
    const double fl = std::floor(exact + 1e-9);
    size[i] = static_cast<std::size_t>(fl);
    frac[i] = std::max(0.0, exact - fl);
    assigned += size[i];
  }
  // Hand leftovers to the largest fractional parts; ties go train, val, test.
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++size[order[k % 3]];
  return {size[0], size[1], size[2]};
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[uniform_below(rng, i)]);
  return idx;
}

}  // namespace roadhazard
