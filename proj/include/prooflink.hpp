#pragma once

#include "prooflink/closure.hpp"
#include "prooflink/filter.hpp"
#include "prooflink/formula.hpp"
#include "prooflink/frame.hpp"
#include "prooflink/kbest.hpp"
#include "prooflink/prover.hpp"
