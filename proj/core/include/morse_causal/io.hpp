#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morse_causal/barrier.hpp"
#include "morse_causal/reach.hpp"
#include "morse_causal/regions.hpp"

namespace morse {

// {params, pieces: [{name, samples: [{t, x1, x2, v, residual}]}], min_margin,
//  verdict}. v is null where the tangent is vertical.
std::string certificate_json(const BarrierCertificate& cert, int indent = 2);

// Columns component,s,x1,x2,residual.
std::string trace_csv(const BoundaryTrace& trace);

// Columns x1,x2,label with one row per cell.
std::string grid_csv(const ReachGrid& grid);

// Run-length binary: 16-byte header ("MRCH", u16 version, u16 nx, u16 ny,
// 6 zero bytes), domain as 4 x f64 (xmin, xmax, ymin, ymax), u32 run count,
// then u32 run lengths alternating Unreached/Reached starting with
// Unreached, row-major. All little-endian.
inline constexpr std::uint16_t kRleVersion = 1;
std::vector<std::uint8_t> encode_rle(const ReachGrid& grid);
// Restores domain, resolution and labels; seed and orientation are not stored.
ReachGrid decode_rle(const std::vector<std::uint8_t>& bytes);

void write_file(const std::string& path, const std::string& data);
void write_file(const std::string& path, const std::vector<std::uint8_t>& data);
std::vector<std::uint8_t> read_file(const std::string& path);

// Flat key = value file; '#' starts a comment, surrounding quotes are removed.
std::map<std::string, std::string> parse_config(const std::string& text);

}  // namespace morse
