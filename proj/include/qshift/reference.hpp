#pragma once

// Serial, unoptimized versions of the hot kernels. They follow the textbook
// definitions literally (explicit window lists, one exp per term, full scans)
// and exist to check the OpenMP kernels and to serve as the benchmark baseline.

#include "qshift/density.hpp"
#include "qshift/graph.hpp"

namespace qshift::reference {

DensityField density_P(const Image& image, const Hyperparams& hp, const NoiseModel& noise);

ParentGraph build_graph_original(const Image& image, const DensityField& density, const Hyperparams& hp,
                                 OriginalGraphOptions options = {});

ParentGraph build_graph_simplified(const DensityField& field, int kw, double dm);

int count_local_maxima(const DensityField& field, int kw, double dm, const Region& region);

}  // namespace qshift::reference
