pub mod chemio;
pub mod crossdock;
pub mod curate;
pub mod fixtures;
pub mod geom;
pub mod ligrmsd;
pub mod metrics;
pub mod par;
pub mod pocketsim;
pub mod relax;
pub mod seqalign;
pub mod validity;
