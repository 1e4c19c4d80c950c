#pragma once

#include "xorlab/ensemble.hpp"
#include "xorlab/error.hpp"
#include "xorlab/galois.hpp"
#include "xorlab/labels.hpp"
#include "xorlab/linalg.hpp"
#include "xorlab/peel.hpp"
#include "xorlab/rng.hpp"
#include "xorlab/sparse_matrix.hpp"
#include "xorlab/theory.hpp"
#include "xorlab/version.hpp"
#include "xorlab/wp.hpp"
