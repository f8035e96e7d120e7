#pragma once

#include "compactkit/error.hpp"
#include "compactkit/grid.hpp"
#include "compactkit/moduli.hpp"
#include "compactkit/cover.hpp"
#include "compactkit/classical.hpp"
#include "compactkit/kolmogorov.hpp"
#include "compactkit/fourier.hpp"
#include "compactkit/bv_helly.hpp"
#include "compactkit/sobolev.hpp"
#include "compactkit/io.hpp"
#include "compactkit/cli.hpp"
