#include "kgsum/memtrack.hpp"

#include <atomic>
#include <cstdlib>
#include <new>

#include <malloc.h>  // malloc_usable_size

namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};

void account_add(std::size_t sz) {
    std::size_t cur = g_current.fetch_add(sz, std::memory_order_relaxed) + sz;
    std::size_t prev = g_peak.load(std::memory_order_relaxed);
    while (cur > prev &&
           !g_peak.compare_exchange_weak(prev, cur, std::memory_order_relaxed)) {
    }
}

void account_sub(std::size_t sz) {
    g_current.fetch_sub(sz, std::memory_order_relaxed);
}

void* tracked_malloc(std::size_t sz) {
    void* p = std::malloc(sz ? sz : 1);
    if (p) account_add(malloc_usable_size(p));
    return p;
}

void* tracked_aligned(std::size_t sz, std::size_t align) {
    // aligned_alloc wants the size rounded up to a multiple of the alignment.
    std::size_t rounded = (sz + align - 1) / align * align;
    void* p = std::aligned_alloc(align, rounded ? rounded : align);
    if (p) account_add(malloc_usable_size(p));
    return p;
}

void tracked_free(void* p) {
    if (!p) return;
    account_sub(malloc_usable_size(p));
    std::free(p);
}

}  // namespace

namespace kgsum::memtrack {

std::size_t current_bytes() { return g_current.load(std::memory_order_relaxed); }

std::size_t peak_bytes() { return g_peak.load(std::memory_order_relaxed); }

void reset_peak() {
    g_peak.store(g_current.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

}  // namespace kgsum::memtrack

void* operator new(std::size_t sz) {
    void* p = tracked_malloc(sz);
    if (!p) throw std::bad_alloc();
    return p;
}

void* operator new[](std::size_t sz) {
    void* p = tracked_malloc(sz);
    if (!p) throw std::bad_alloc();
    return p;
}

void* operator new(std::size_t sz, const std::nothrow_t&) noexcept {
    return tracked_malloc(sz);
}

void* operator new[](std::size_t sz, const std::nothrow_t&) noexcept {
    return tracked_malloc(sz);
}

void* operator new(std::size_t sz, std::align_val_t al) {
    void* p = tracked_aligned(sz, static_cast<std::size_t>(al));
    if (!p) throw std::bad_alloc();
    return p;
}

void* operator new[](std::size_t sz, std::align_val_t al) {
    void* p = tracked_aligned(sz, static_cast<std::size_t>(al));
    if (!p) throw std::bad_alloc();
    return p;
}

void operator delete(void* p) noexcept { tracked_free(p); }
void operator delete[](void* p) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete(void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
