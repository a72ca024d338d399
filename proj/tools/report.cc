// Copyright 2026 The offeval Authors.
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
#include "report.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "offeval/errors.h"
#include "offeval/io.h"

namespace offeval::tools {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo;
  double hi;
  void Widen() {
    if (hi - lo <= 0.0) {
      const double pad = lo == 0.0 ? 0.5 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string RenderSvg(const std::vector<NamedSeries>& series) {
  if (series.empty()) throw DataError("", 0, "no series to render");
  Range x{0, 0}, y{0, 0};
  bool first = true;
  for (const auto& s : series) {
    if (s.points.empty()) throw DataError(s.name, 0, "series is empty");
    for (const auto& p : s.points) {
      const auto t = static_cast<double>(p.time);
      if (first) {
        x = {t, t};
        y = {p.result.score, p.result.score};
        first = false;
      }
      x.lo = std::min(x.lo, t);
      x.hi = std::max(x.hi, t);
      y.lo = std::min(y.lo, p.result.score);
      y.hi = std::max(y.hi, p.result.score);
    }
  }
  x.Widen();
  y.Widen();
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double t) { return kLeft + (t - x.lo) / (x.hi - x.lo) * plot_w; };
  auto py = [&](double s) {
    return kTop + plot_h - (s - y.lo) / (y.hi - y.lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(kTop + plot_h)
      << "\" x2=\"" << Fixed(kLeft + plot_w) << "\" y2=\""
      << Fixed(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(kTop)
      << "\" x2=\"" << Fixed(kLeft) << "\" y2=\"" << Fixed(kTop + plot_h)
      << "\"/>\n</g>\n";
  svg << "<g class=\"ticks\" fill=\"black\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x.lo + (x.hi - x.lo) * t / 4.0;
    const double yv = y.lo + (y.hi - y.lo) * t / 4.0;
    svg << "<text x=\"" << Fixed(px(xv)) << "\" y=\""
        << Fixed(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << Short(xv) << "</text>\n"
        << "<text x=\"" << Fixed(kLeft - 6) << "\" y=\"" << Fixed(py(yv) + 4)
        << "\" text-anchor=\"end\">" << Short(yv) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text class=\"xlabel\" x=\"" << Fixed(kLeft + plot_w / 2) << "\" y=\""
      << Fixed(kHeight - 15) << "\" text-anchor=\"middle\">time</text>\n"
      << "<text class=\"ylabel\" x=\"18\" y=\"" << Fixed(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << Fixed(kTop + plot_h / 2) << ")\">score</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < series[s].points.size(); ++j) {
      const auto& p = series[s].points[j];
      if (j > 0) svg << ' ';
      svg << Fixed(px(static_cast<double>(p.time))) << ','
          << Fixed(py(p.result.score));
    }
    svg << "\"/>\n";
  }
  svg << "<g class=\"legend\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
    const double lx = kLeft + plot_w + 15;
    svg << "<line x1=\"" << Fixed(lx) << "\" y1=\"" << Fixed(ly) << "\" x2=\""
        << Fixed(lx + 20) << "\" y2=\"" << Fixed(ly) << "\" stroke=\""
        << kPalette[s % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n"
        << "<text class=\"legend-entry\" x=\"" << Fixed(lx + 26) << "\" y=\""
        << Fixed(ly + 4) << "\">" << Escape(series[s].name) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void RenderSeries(const std::vector<std::filesystem::path>& inputs,
                  const std::filesystem::path& out) {
  std::vector<NamedSeries> series;
  for (const auto& path : inputs) {
    auto points = ReadTimeline(path);
    if (points.empty()) throw DataError(path.string(), 0, "series is empty");
    series.push_back({path.stem().string(), std::move(points)});
  }
  WriteFile(out, RenderSvg(series));
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string(), 0, "cannot open file");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return Sha256Hex(bytes);
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(path.string(), 0, "cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError(path.string(), 0, "write failed");
}

}  // namespace offeval::tools
