//! Interactive session: a human plays one side against the engine.

use std::io::{BufRead, Write};
use std::path::Path;

use rcg_core::game::{
    check_announcement, initial_state, is_terminal, legal_announcements, legal_moves, step, AdversaryPolicy,
    Announcement, GameState, PolicyError, Round, Transcript, TravelerPolicy,
};
use rcg_core::solver::{EngineAdversary, EngineTraveler, Mode, SolverConfig};
use rcg_core::temporal::{ArcId, RcgInstance};

use crate::error::{write, CliError};

fn out_err(e: std::io::Error) -> CliError {
    CliError::Aborted(e.to_string())
}

fn policy_err(e: PolicyError) -> CliError {
    match e {
        PolicyError::Resource(msg) => CliError::Resource(msg),
        other => CliError::Mismatch(format!("engine failed: {other}")),
    }
}

/// Reads one line; `None` at end of input.
fn prompt(input: &mut dyn BufRead, out: &mut dyn Write, text: &str) -> Result<Option<String>, CliError> {
    write!(out, "{text}").map_err(out_err)?;
    out.flush().map_err(out_err)?;
    let mut line = String::new();
    match input.read_line(&mut line) {
        Ok(0) => Ok(None),
        Ok(_) => Ok(Some(line.trim().to_string())),
        Err(e) => Err(out_err(e)),
    }
}

fn parse_arc(token: &str) -> Option<ArcId> {
    token.strip_prefix('a').unwrap_or(token).parse().ok().map(ArcId)
}

fn describe(inst: &RcgInstance, state: &GameState, ann: &Announcement, arc: ArcId) -> String {
    let a = inst.graph().arc(arc).expect("listed arcs exist");
    let delays = state.delays.union(ann.iter());
    let mark = if delays.contains(arc) { " delayed" } else { "" };
    format!("{arc} to {} departs {} arrives {}{mark}", a.head, a.effective_label(&delays), a.arrival(&delays))
}

fn list(ids: impl IntoIterator<Item = ArcId>) -> String {
    let v: Vec<String> = ids.into_iter().map(|a| a.to_string()).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

pub fn run(
    inst: &RcgInstance,
    human_traveler: bool,
    max_states: usize,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    save: &Path,
) -> Result<(), CliError> {
    let config = SolverConfig { max_states, ..SolverConfig::new(Mode::Memo) };
    let mut engine_traveler = EngineTraveler::with_config(inst, config);
    let mut engine_adversary = EngineAdversary::with_config(inst, config);
    let mut state = initial_state(inst);
    let mut rounds = Vec::new();
    let role = if human_traveler { "traveler" } else { "adversary" };
    writeln!(
        out,
        "you play the {role}; start {} target {} budget {} delay {}",
        inst.start(),
        inst.target(),
        inst.budget(),
        inst.delta()
    )
    .map_err(out_err)?;

    let outcome = loop {
        if let Some(o) = is_terminal(inst, &state) {
            break o;
        }
        let round = rounds.len() + 1;
        writeln!(
            out,
            "round {round}: traveler at {} time {}, {} delays used",
            state.position,
            state.clock,
            state.delays.len()
        )
        .map_err(out_err)?;

        let ann = if human_traveler {
            let ann = engine_adversary.announce(inst, &state).map_err(policy_err)?;
            writeln!(out, "adversary delays: {}", list(ann.iter())).map_err(out_err)?;
            ann
        } else {
            let legal = legal_announcements(inst, &state);
            writeln!(out, "you may delay up to {} of: {}", legal.max_size(), list(legal.candidates().iter().copied()))
                .map_err(out_err)?;
            loop {
                let Some(line) = prompt(input, out, "delay (arc ids, blank for none)> ")? else {
                    return Err(CliError::Aborted("end of input".into()));
                };
                let ids: Option<Vec<ArcId>> = line.split_whitespace().map(parse_arc).collect();
                let Some(ids) = ids else {
                    writeln!(out, "could not read arc ids in `{line}`").map_err(out_err)?;
                    continue;
                };
                let ann: Announcement = ids.iter().copied().collect();
                if ann.len() != ids.len() {
                    writeln!(out, "an arc is listed twice").map_err(out_err)?;
                    continue;
                }
                match check_announcement(inst, &state, &ann) {
                    Ok(()) => break ann,
                    Err(v) => writeln!(out, "illegal: {v}").map_err(out_err)?,
                }
            }
        };

        let moves = legal_moves(inst, &state, &ann);
        let mv = if human_traveler {
            writeln!(out, "your moves:").map_err(out_err)?;
            for &a in &moves {
                writeln!(out, "  {}", describe(inst, &state, &ann, a)).map_err(out_err)?;
            }
            loop {
                let Some(line) = prompt(input, out, "move> ")? else {
                    return Err(CliError::Aborted("end of input".into()));
                };
                match parse_arc(&line) {
                    Some(a) if moves.contains(&a) => break a,
                    _ => writeln!(out, "illegal: `{line}` is not one of {}", list(moves.iter().copied()))
                        .map_err(out_err)?,
                }
            }
        } else {
            let mv = engine_traveler.choose_move(inst, &state, &ann).map_err(policy_err)?;
            writeln!(out, "traveler takes {}", describe(inst, &state, &ann, mv)).map_err(out_err)?;
            mv
        };
        state =
            step(inst, &state, &ann, mv).map_err(|v| CliError::Mismatch(format!("referee rejected a move: {v}")))?;
        rounds.push(Round { announcement: ann.iter().collect(), moved: mv });
    };

    let transcript = Transcript { rounds, outcome: outcome.winner };
    write(save, &transcript.to_rcgt())?;
    writeln!(out, "winner: {}", outcome.winner).map_err(out_err)?;
    writeln!(out, "transcript saved to {}", save.display()).map_err(out_err)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcg_core::temporal::parse_instance;

    fn chain(budget: usize) -> RcgInstance {
        parse_instance(&format!("p rcg 3 2 1 {budget}\ns 1\nz 3\na 1 2 1 1\na 2 3 2 1\n")).unwrap()
    }

    fn session(inst: &RcgInstance, human_traveler: bool, input: &str) -> (Result<(), CliError>, String) {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Vec::new();
        let r = run(inst, human_traveler, 1000, &mut input.as_bytes(), &mut out, &dir.path().join("t.rcgt"));
        (r, String::from_utf8(out).unwrap())
    }

    #[test]
    fn human_traveler_wins_unopposed_chain() {
        let (r, out) = session(&chain(0), true, "a1\na2\n");
        assert!(r.is_ok());
        assert!(out.contains("winner: TRAVELER"));
    }

    #[test]
    fn engine_adversary_cuts_the_chain() {
        let (r, out) = session(&chain(1), true, "a1\n");
        assert!(r.is_ok());
        assert!(out.contains("adversary delays: a1"));
        assert!(out.contains("winner: ADVERSARY"));
    }

    #[test]
    fn illegal_input_reprompts_and_eof_aborts() {
        let (r, out) = session(&chain(1), false, "a2\nbogus\n");
        assert!(out.contains("illegal: arc a2 does not leave the current vertex 1"));
        assert!(out.contains("could not read arc ids"));
        assert!(matches!(r, Err(CliError::Aborted(_))));
    }
}
