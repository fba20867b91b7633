#pragma once

namespace ncstream::model {

// Round-based reference-node pollution propagation model.
//
// A reference node has n uploaders out of a network of N nodes, N_m of which
// are malicious; time is sliced into rounds, each uploader delivers one packet
// per round, malicious uploaders pollute independently with p_poll, and the
// node recombines each buffered packet with probability p_r. The number of
// rounds to recover a generation of size k is ceil(k/n) + 1 with every packet
// assumed innovative. These simplifications live only here and in the test
// oracle; the overlay simulator shares none of them.
struct ModelParams {
    int N = 1000;        // total nodes
    int N_m = 50;        // malicious nodes
    int n = 25;          // uploaders of the reference node
    int k = 100;         // generation size
    double p_poll = 0.1; // per-transmission pollution probability
    double p_r = 0.5;    // per-packet recombination probability

    void validate() const;
    int rounds() const;  // ceil(k/n) + 1
};

// P{b of the i*x packets received from malicious uploaders by round i are
// polluted}: binomial pmf, evaluated in the log domain so i*x in the
// thousands stays finite.
double p_p(int i, int x, int b, double p_poll);

// P{the packet recombined at round i is polluted | x malicious uploaders}.
double p_rp(int i, int x, const ModelParams& params);

// P{x of the n uploaders are malicious}: hypergeometric pmf.
double p_mn(int N, int N_m, int n, int x);

// P{the packet recombined at round i is polluted}, uploader mix marginalized.
double p_gp(int i, const ModelParams& params);

// P{no polluted packet is drawn for recombination in any round of a
// generation's recovery}.
double p_fclean(const ModelParams& params);

// P{the recovered generation payload is clean, i.e. no polluted packet was
// received at all}.
double p_rclean(const ModelParams& params);

}  // namespace ncstream::model
