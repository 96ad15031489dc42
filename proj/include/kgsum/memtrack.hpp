#pragma once

#include <cstddef>

namespace kgsum::memtrack {

// Heap accounting backed by the global operator new/delete replacements in
// memtrack.cpp. Numbers are usable-size bytes (what the allocator actually
// handed out), so they slightly exceed requested sizes. Thread-safe.

std::size_t current_bytes();
std::size_t peak_bytes();

// Rebases the high-water mark to the current live total, so the next
// peak_bytes() reading reflects only allocations made after this call.
void reset_peak();

}  // namespace kgsum::memtrack
