use std::path::Path;

use coopkit::belief_space::{BeliefSpace, Event, Player, SpaceError};
use coopkit::fixtures;
use coopkit::rational;
use coopkit::stage_game::{CooperationGame, GameError};

use crate::error::CliError;

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn space_error(e: SpaceError) -> CliError {
    match e {
        SpaceError::Parse(m) => CliError::Parse(format!("belief space: {m}")),
        other => CliError::invalid(&other),
    }
}

pub fn game_error(e: GameError) -> CliError {
    match e {
        GameError::Parse(m) => CliError::Parse(format!("stage game: {m}")),
        GameError::UnknownGame(name) => CliError::Usage(format!("unknown game `{name}`")),
        other => CliError::invalid(&other),
    }
}

/// A JSON file when `spec` names an existing file, otherwise a built-in.
pub fn space(spec: &str) -> Result<BeliefSpace, CliError> {
    if Path::new(spec).is_file() {
        return BeliefSpace::from_json_str(&read(spec)?).map_err(space_error);
    }
    fixtures::space_by_name(spec).ok_or_else(|| {
        CliError::Usage(format!(
            "`{spec}` is neither a file nor a built-in space ({})",
            fixtures::SPACE_NAMES.join(", ")
        ))
    })
}

pub fn game(spec: &str) -> Result<CooperationGame, CliError> {
    if Path::new(spec).is_file() {
        return CooperationGame::from_json_str(&read(spec)?).map_err(game_error);
    }
    fixtures::game_by_name(spec).map_err(game_error)
}

/// Splits on commas that are not inside parentheses.
fn items(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(body[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(body[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

/// Parses `C1={3/4}`, `K2={(1/2,1/2),(3/4,1/2)}` or a bare `{..}`. A state
/// name selects that state; a rational selects every state where the
/// player's own discount factor equals it.
pub fn event(space: &BeliefSpace, player: Player, text: &str) -> Result<Event, CliError> {
    let body = text.split_once('=').map_or(text, |(_, b)| b).trim();
    let body = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| CliError::Usage(format!("expected `{{..}}` in `{text}`")))?;
    let mut e = space.empty_event();
    for item in items(body) {
        if let Some(w) = space.state_index(item) {
            e.insert(w);
            continue;
        }
        let value = rational::parse(item)
            .map_err(|_| CliError::Usage(format!("`{item}` is neither a state nor a discount factor")))?;
        let matching = space.event_from_fn(|w| *space.discount(player, w) == value);
        if matching.is_empty() {
            return Err(CliError::Usage(format!("no state has λ{} = {item}", player.number())));
        }
        e = e.union(&matching);
    }
    Ok(e)
}
