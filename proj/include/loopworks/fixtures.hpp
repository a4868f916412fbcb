#ifndef LOOPWORKS_FIXTURES_HPP
#define LOOPWORKS_FIXTURES_HPP

#include <vector>

#include "loopworks/chain.hpp"
#include "loopworks/wilson.hpp"

namespace loopworks {
namespace fixtures {

// Three-state demo chain: A = {1, 2}, absorbing boundary {3},
// p(1,.) = (1/3, 1/3, 1/3), p(2,.) = (1/2, 1/6, 1/3).
ChainSpec demo_chain_d3();

// rows x cols interior sites inside an absorbing frame; simple random walk
// steps to the four grid neighbors with weight 1/4.
ChainSpec grid_chain(int rows, int cols);

// Cycle of n vertices with the listed ones absorbing; SRW on the rest.
ChainSpec cycle_chain(int n, const std::vector<int>& boundary);

// Directed acyclic chain (no loops possible): 1 -> 2 -> 3 -> exit.
ChainSpec acyclic_chain();

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph grid_graph(int rows, int cols);
Graph path_graph(int n);
// Fixed 6-vertex connected graph with an irregular degree sequence.
Graph random_connected_graph();

// Small chains exercised by the linear-algebra property checks.
std::vector<ChainSpec> linops_fixtures();

}  // namespace fixtures
}  // namespace loopworks

#endif
