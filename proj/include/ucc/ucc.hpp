#pragma once

#include "ucc/error.hpp"
#include "ucc/linalg.hpp"
#include "ucc/circuit.hpp"
#include "ucc/decompose.hpp"
#include "ucc/metrics.hpp"
#include "ucc/io.hpp"
#include "ucc/loss.hpp"
