#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfnav {

/// Occupancy grid course in pixel units. Immutable after construction
/// and safe to share read-only across rollouts.
struct Track {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> occupancy;  // row-major, 1 = boundary
  double spawn_x = 0.0;
  double spawn_y = 0.0;
  double spawn_theta_deg = 0.0;
  // Free-space centroid; checkpoint gates fan out from here.
  double hub_x = 0.0;
  double hub_y = 0.0;

  bool wall_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return true;
    return occupancy[static_cast<std::size_t>(y) * width + x] != 0;
  }

  void set_wall(int x, int y, bool wall) {
    occupancy[static_cast<std::size_t>(y) * width + x] = wall ? 1 : 0;
  }
};

struct TrackError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void seal_border(Track& track) {
  for (int x = 0; x < track.width; ++x) {
    track.set_wall(x, 0, true);
    track.set_wall(x, track.height - 1, true);
  }
  for (int y = 0; y < track.height; ++y) {
    track.set_wall(0, y, true);
    track.set_wall(track.width - 1, y, true);
  }
}

inline void compute_hub(Track& track) {
  double sx = 0.0, sy = 0.0;
  std::int64_t n = 0;
  for (int y = 0; y < track.height; ++y) {
    for (int x = 0; x < track.width; ++x) {
      if (!track.wall_at(x, y)) {
        sx += x;
        sy += y;
        ++n;
      }
    }
  }
  track.hub_x = n > 0 ? sx / static_cast<double>(n) : track.width / 2.0;
  track.hub_y = n > 0 ? sy / static_cast<double>(n) : track.height / 2.0;
}

}  // namespace detail

/// All-free grid with a sealed one-cell border.
inline Track make_sealed_track(int width, int height) {
  if (width < 3 || height < 3) {
    throw TrackError("make_sealed_track: dimensions must be at least 3x3");
  }
  Track track;
  track.width = width;
  track.height = height;
  track.occupancy.assign(static_cast<std::size_t>(width) * height, 0);
  track.spawn_x = width / 2.0;
  track.spawn_y = height / 2.0;
  detail::seal_border(track);
  detail::compute_hub(track);
  return track;
}

/// Built-in ring course at the reference dimensions: free space is the
/// annulus between radii 370 and 630 around (830, 1420), which places
/// the spawn mid-band.
inline Track make_oval_track() {
  Track track;
  track.width = 2000;
  track.height = 2080;
  track.occupancy.assign(static_cast<std::size_t>(track.width) * track.height, 1);
  const double cx = 830.0, cy = 1420.0;
  const double inner = 370.0, outer = 630.0;
  for (int y = 0; y < track.height; ++y) {
    for (int x = 0; x < track.width; ++x) {
      const double dx = x - cx, dy = y - cy;
      const double r2 = dx * dx + dy * dy;
      if (r2 >= inner * inner && r2 <= outer * outer) {
        track.set_wall(x, y, false);
      }
    }
  }
  detail::seal_border(track);
  track.spawn_x = 830.0;
  track.spawn_y = 920.0;
  track.spawn_theta_deg = 0.0;
  track.hub_x = cx;
  track.hub_y = cy;
  return track;
}

/// Parse the run-length track format:
///   line 1:        width height spawn_x spawn_y spawn_theta
///   lines 2..H+1:  count:value tokens summing to width, value 0 or 1
inline Track parse_track(std::istream& in, const std::string& origin) {
  auto fail = [&origin](int line, const std::string& msg) -> TrackError {
    return TrackError(origin + ":" + std::to_string(line) + ": " + msg);
  };

  std::string line;
  if (!std::getline(in, line)) throw fail(1, "missing header line");
  Track track;
  {
    std::istringstream header(line);
    if (!(header >> track.width >> track.height >> track.spawn_x >> track.spawn_y >>
          track.spawn_theta_deg)) {
      throw fail(1, "header must be: width height spawn_x spawn_y spawn_theta");
    }
    if (track.width < 3 || track.height < 3) {
      throw fail(1, "dimensions must be at least 3x3");
    }
  }
  track.occupancy.assign(static_cast<std::size_t>(track.width) * track.height, 0);

  for (int y = 0; y < track.height; ++y) {
    const int line_no = y + 2;
    if (!std::getline(in, line)) throw fail(line_no, "missing row data");
    std::istringstream row(line);
    std::string token;
    int x = 0;
    while (row >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw fail(line_no, "bad token '" + token + "' (expected count:value)");
      }
      int count = 0, value = 0;
      try {
        count = std::stoi(token.substr(0, colon));
        value = std::stoi(token.substr(colon + 1));
      } catch (const std::exception&) {
        throw fail(line_no, "bad token '" + token + "' (expected count:value)");
      }
      if (count <= 0 || (value != 0 && value != 1)) {
        throw fail(line_no, "bad token '" + token + "' (count > 0, value 0 or 1)");
      }
      if (x + count > track.width) {
        throw fail(line_no, "row is longer than width " + std::to_string(track.width));
      }
      for (int i = 0; i < count; ++i) {
        track.set_wall(x + i, y, value == 1);
      }
      x += count;
    }
    if (x != track.width) {
      throw fail(line_no, "row covers " + std::to_string(x) + " cells, expected " +
                              std::to_string(track.width));
    }
  }
  detail::seal_border(track);
  detail::compute_hub(track);
  return track;
}

inline void save_track(const Track& track, std::ostream& out) {
  out << track.width << ' ' << track.height << ' ' << track.spawn_x << ' '
      << track.spawn_y << ' ' << track.spawn_theta_deg << '\n';
  for (int y = 0; y < track.height; ++y) {
    int run = 1;
    bool value = track.wall_at(0, y);
    bool first = true;
    for (int x = 1; x <= track.width; ++x) {
      const bool next = x < track.width ? track.wall_at(x, y) : !value;
      if (x < track.width && next == value) {
        ++run;
        continue;
      }
      out << (first ? "" : " ") << run << ':' << (value ? 1 : 0);
      first = false;
      value = next;
      run = 1;
    }
    out << '\n';
  }
}

/// Load a built-in course by name or a run-length file by path.
inline Track load_track(const std::string& source) {
  if (source == "oval") {
    return make_oval_track();
  }
  std::ifstream in(source);
  if (!in) {
    throw TrackError("cannot open track file '" + source + "'");
  }
  return parse_track(in, source);
}

}  // namespace pfnav
