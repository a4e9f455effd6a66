#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string_view>

namespace snakes {

// The four compass moves. North decreases y, South increases it, so (0,0)
// is the top-left corner of the board.
enum class Direction : std::uint8_t { North, South, East, West };

// Canonical iteration order for tie-breaking: North, East, South, West.
inline constexpr std::array<Direction, 4> kDirectionOrder = {
    Direction::North, Direction::East, Direction::South, Direction::West};

constexpr Direction opposite(Direction d) {
  switch (d) {
    case Direction::North: return Direction::South;
    case Direction::South: return Direction::North;
    case Direction::East: return Direction::West;
    case Direction::West: return Direction::East;
  }
  return Direction::North;  // unreachable
}

constexpr std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::North: return "N";
    case Direction::South: return "S";
    case Direction::East: return "E";
    case Direction::West: return "W";
  }
  return "?";
}

struct Cell {
  int x = 0;  // column
  int y = 0;  // row
  friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

constexpr int dx(Direction d) {
  return d == Direction::East ? 1 : d == Direction::West ? -1 : 0;
}

constexpr int dy(Direction d) {
  return d == Direction::South ? 1 : d == Direction::North ? -1 : 0;
}

constexpr Cell neighbor(Cell c, Direction d) { return {c.x + dx(d), c.y + dy(d)}; }

constexpr bool on_board(Cell c, int width, int height) {
  return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
}

constexpr int cell_index(Cell c, int width) { return c.y * width + c.x; }

constexpr int manhattan(Cell a, Cell b) {
  const int ax = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int ay = a.y > b.y ? a.y - b.y : b.y - a.y;
  return ax + ay;
}

inline std::ostream& operator<<(std::ostream& os, Cell c) {
  return os << '(' << c.x << ',' << c.y << ')';
}

inline std::ostream& operator<<(std::ostream& os, Direction d) {
  return os << direction_name(d);
}

}  // namespace snakes
