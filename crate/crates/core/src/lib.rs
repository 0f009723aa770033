//! Bounded synthesis of finite-memory controllers from LTL specifications
//! with multi-dimensional mean-payoff and energy objectives.
//!
//! The pipeline: formula → universal co-Büchi automaton ([`automata`]) →
//! counting-function determinization ([`counting`]) → implicit safety game
//! solved over antichains ([`antichain`], [`game`]) → Moore machine
//! extraction and independent verification ([`synthesis`]).

pub mod ltl;
pub mod automata;
pub mod counting;
pub mod antichain;
pub mod game;
pub mod synthesis;
pub mod cli;
