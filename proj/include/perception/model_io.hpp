#pragma once

// Flat binary format for trained networks. All fields little-endian,
// fixed width; doubles are stored as their IEEE-754 bit patterns in u64.
//
//   magic      8 bytes  "PRCPNET\0"
//   version    u32      1
//   flags      u32      bit0 eject, bit1 with_replacement, bit2 standardize
//   seed       u64
//   mu, sigma  u64, u64 (double bits)
//   sub_min    u64      0 = default rule min(10, N)
//   sub_max    u64      0 = default rule min(1000, N)
//   fixed      u64      0 = variable subsample sizes
//   cfg_dec    i32      configured decimals, -1 = auto
//   n_neurons  u32
//   dims       u64
//   decimals   i32      resolved scale used by every neuron
//   per neuron:
//     median i64, S i64, W i64, d i32, flags u32 (bit0 degenerate)
//     drawn u64, ejected u64
//     if dims > 1: dims x u64 centre medians (double bits)
//     if dims > 1 and standardize: dims x u64 spreads (double bits)

#include <cstdint>
#include <string>
#include <vector>

#include "perception/network.hpp"

namespace perception {

inline constexpr std::uint32_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_network(const NetworkModel& network);
NetworkModel deserialize_network(const std::vector<std::uint8_t>& bytes);

void save_network(const NetworkModel& network, const std::string& path);
NetworkModel load_network(const std::string& path);

}  // namespace perception
