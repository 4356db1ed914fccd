#include <benchmark/benchmark.h>

// The distribution's prebuilt benchmark_main archive is LTO bytecode from a
// different compiler release, so the entry point is compiled here.
BENCHMARK_MAIN();
