"""Synthetic task corpus: descriptions, reference handlers, test suites.

Everything here is generated by pure index arithmetic, so building the same
corpus twice yields identical documents. Each task carries a description, a
semantic suite, and a canned provider response whose fixture needle is the
full description text; longest-needle matching therefore routes every build
to its own response even if one description happens to contain another.

Descriptions stay in the author's language; two of the easy tasks are
written in Chinese and flow through the pipeline untranslated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from string import Template
from textwrap import dedent
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..homesim import SemanticTestCase
from .dataset import TaskSpec, dump_dataset

LIGHT_ROOMS = ("livingroom", "bedroom", "kitchen", "bathroom", "hallway")
BLINDS_ROOMS = ("livingroom", "bedroom")
THERMO_ROOMS = ("livingroom", "bedroom")
SENSOR_ROOMS = ("livingroom", "hallway")

_LABELS = {
    "livingroom": "living room",
    "bedroom": "bedroom",
    "kitchen": "kitchen",
    "bathroom": "bathroom",
    "hallway": "hallway",
}

# seeded defect mix: 8 import-broken, 5 data-handling, 4 missing-code, 3 prose
DEFECT_HISTOGRAM = {
    "ImportError": 8,
    "DataHandling": 5,
    "MissingCode": 4,
    "NoCode": 3,
}

_DEFECT_LAYOUT = (
    "import", "data", "import", "missing", "import", "prose", "import",
    "data", "import", "missing", "data", "import", "prose", "import",
    "data", "missing", "import", "data", "missing", "prose",
)


@dataclass(frozen=True)
class Recipe:
    description: str
    py: str
    js: str
    suite: Tuple[SemanticTestCase, ...]


@dataclass(frozen=True)
class CorpusBundle:
    tasks: Tuple[TaskSpec, ...]
    fixtures: dict


# --- document helpers ---


def _invoke(at: int, payload: str) -> dict:
    return {"at": at, "kind": "invoke_function", "payload": payload}


def _set(at: int, device: str, attribute: str, value) -> dict:
    return {"at": at, "kind": "set_attribute", "device": device,
            "attribute": attribute, "value": value}


def _fire(at: int, device: str, value: bool) -> dict:
    return {"at": at, "kind": "fire_sensor", "device": device, "value": value}


def _eq(device: str, attribute: str, value) -> dict:
    return {"kind": "attribute_equals", "device": device,
            "attribute": attribute, "value": value}


def _ev(device: str, attribute: str, new=None) -> dict:
    doc = {"kind": "event_occurred", "device": device, "attribute": attribute}
    if new is not None:
        doc["new"] = new
    return doc


def _order(first_device: str, first_attr: str,
           then_device: str, then_attr: str) -> dict:
    return {
        "kind": "event_order",
        "first": {"device": first_device, "attribute": first_attr},
        "then": {"device": then_device, "attribute": then_attr},
    }


def _still(device: str, attribute: Optional[str] = None) -> dict:
    doc = {"kind": "no_change", "device": device}
    if attribute is not None:
        doc["attribute"] = attribute
    return doc


def _case(name: str, stimuli: List[dict],
          assertions: List[dict]) -> SemanticTestCase:
    return SemanticTestCase.from_dict({
        "name": name,
        "scenario": {"initial_state": {}, "stimuli": stimuli},
        "assertions": assertions,
    })


def _code(template: str, **values) -> str:
    return Template(dedent(template).lstrip("\n")).substitute(**values)


_OPENERS = (
    "Here is the function.",
    "Below is a handler that does what you described.",
    "This should cover it.",
    "Sure, the implementation follows.",
)
_CLOSERS = (
    "It is ready to deploy as is.",
    "No extra packages are needed.",
    "",
    "Let me know if anything should change.",
)


def _respond(code: str, runtime: str, salt: int) -> str:
    tag = "python" if runtime == "python3" else "javascript"
    text = f"{_OPENERS[salt % len(_OPENERS)]}\n\n```{tag}\n{code}```\n"
    closer = _CLOSERS[salt % len(_CLOSERS)]
    if closer:
        text += f"\n{closer}\n"
    return text


# --- easy tier: one action per task ---


def _easy_recipes() -> List[Recipe]:
    recipes: List[Recipe] = []

    py_onoff = """
        import home

        def fn(data):
            value = 'on' if data.strip().lower() == 'on' else 'off'
            home.set('light_${room}', 'power', value)
            return value
    """
    js_onoff = """
        const home = require('./home');

        async function fn(data) {
          const value = data.trim().toLowerCase() === 'on' ? 'on' : 'off';
          await home.set('light_${room}', 'power', value);
          return value;
        }

        module.exports = { fn };
    """
    onoff_texts = {
        "bedroom": "收到 'on' 就打开卧室的灯，收到 'off' 就把它关掉，然后回复新的状态。",
    }
    for room in LIGHT_ROOMS:
        light = f"light_{room}"
        description = onoff_texts.get(
            room,
            f"When I send 'on', turn the {_LABELS[room]} light on; "
            f"when I send 'off', turn it off. Reply with the new state.",
        )
        recipes.append(Recipe(
            description=description,
            py=_code(py_onoff, room=room),
            js=_code(js_onoff, room=room),
            suite=(
                _case("switch on", [_invoke(0, "on")],
                      [_eq(light, "power", "on"), _ev(light, "power", "on")]),
                _case("switch off",
                      [_set(0, light, "power", "on"), _invoke(1, "off")],
                      [_eq(light, "power", "off"), _ev(light, "power", "off")]),
            ),
        ))

    py_brightness = """
        import home

        def fn(data):
            level = int(data.strip())
            home.set('light_${room}', 'brightness', level)
            return str(level)
    """
    js_brightness = """
        const home = require('./home');

        async function fn(data) {
          const level = parseInt(data.trim(), 10);
          await home.set('light_${room}', 'brightness', level);
          return String(level);
        }

        module.exports = { fn };
    """
    brightness_texts = {
        "kitchen": "把厨房灯的亮度调到我发来的数字，并回复这个数字。",
    }
    for room, value in zip(LIGHT_ROOMS, (12, 37, 58, 73, 91)):
        light = f"light_{room}"
        description = brightness_texts.get(
            room,
            f"Set the {_LABELS[room]} light brightness to exactly the number "
            f"I send and reply with that number.",
        )
        recipes.append(Recipe(
            description=description,
            py=_code(py_brightness, room=room),
            js=_code(js_brightness, room=room),
            suite=(
                _case(f"set {value}", [_invoke(0, str(value))],
                      [_eq(light, "brightness", value),
                       _ev(light, "brightness", value)]),
                _case("set low", [_invoke(0, "5")],
                      [_eq(light, "brightness", 5)]),
            ),
        ))

    py_blinds = """
        import home

        def fn(data):
            position = int(data.strip())
            home.set('blinds_${room}', 'position', position)
            return str(position)
    """
    js_blinds = """
        const home = require('./home');

        async function fn(data) {
          const position = parseInt(data.trim(), 10);
          await home.set('blinds_${room}', 'position', position);
          return String(position);
        }

        module.exports = { fn };
    """
    for room, value in zip(BLINDS_ROOMS, (40, 65)):
        blinds = f"blinds_{room}"
        recipes.append(Recipe(
            description=(
                f"Move the {_LABELS[room]} blinds to the percentage I send "
                f"and confirm with the same number."
            ),
            py=_code(py_blinds, room=room),
            js=_code(js_blinds, room=room),
            suite=(
                _case(f"move to {value}", [_invoke(0, str(value))],
                      [_eq(blinds, "position", value),
                       _ev(blinds, "position", value)]),
                _case("close fully", [_invoke(0, "0")],
                      [_eq(blinds, "position", 0)]),
            ),
        ))

    py_lock = """
        import home

        def fn(data):
            locked = data.strip().lower() == 'lock'
            home.set('lock_frontdoor', 'locked', locked)
            return 'locked' if locked else 'unlocked'
    """
    js_lock = """
        const home = require('./home');

        async function fn(data) {
          const locked = data.trim().toLowerCase() === 'lock';
          await home.set('lock_frontdoor', 'locked', locked);
          return locked ? 'locked' : 'unlocked';
        }

        module.exports = { fn };
    """
    recipes.append(Recipe(
        description=(
            "If I send 'lock', lock the front door; if I send 'unlock', "
            "unlock it. Tell me which one you did."
        ),
        py=_code(py_lock),
        js=_code(js_lock),
        suite=(
            _case("unlock", [_invoke(0, "unlock")],
                  [_eq("lock_frontdoor", "locked", False),
                   _ev("lock_frontdoor", "locked", False)]),
            _case("lock again",
                  [_set(0, "lock_frontdoor", "locked", False),
                   _invoke(1, "lock")],
                  [_eq("lock_frontdoor", "locked", True),
                   _ev("lock_frontdoor", "locked", True)]),
        ),
    ))

    py_volume = """
        import home

        def fn(data):
            volume = int(data.strip())
            home.set('speaker_livingroom', 'volume', volume)
            return 'volume set'
    """
    js_volume = """
        const home = require('./home');

        async function fn(data) {
          const volume = parseInt(data.trim(), 10);
          await home.set('speaker_livingroom', 'volume', volume);
          return 'volume set';
        }

        module.exports = { fn };
    """
    recipes.append(Recipe(
        description=(
            "Set the living room speaker volume to the number I send. "
            "Reply 'volume set'."
        ),
        py=_code(py_volume),
        js=_code(js_volume),
        suite=(
            _case("volume 45", [_invoke(0, "45")],
                  [_eq("speaker_livingroom", "volume", 45)]),
            _case("volume 80", [_invoke(0, "80")],
                  [_eq("speaker_livingroom", "volume", 80),
                   _ev("speaker_livingroom", "volume", 80)]),
        ),
    ))

    py_target = """
        import home

        def fn(data):
            target = float(data.strip())
            home.set('thermostat_${room}', 'target_temp', target)
            return str(target)
    """
    js_target = """
        const home = require('./home');

        async function fn(data) {
          const target = parseFloat(data.trim());
          await home.set('thermostat_${room}', 'target_temp', target);
          return String(target);
        }

        module.exports = { fn };
    """
    for room, value in zip(THERMO_ROOMS, (19, 24)):
        thermostat = f"thermostat_{room}"
        recipes.append(Recipe(
            description=(
                f"Set the {_LABELS[room]} thermostat target temperature to "
                f"the number I send, then reply with the number."
            ),
            py=_code(py_target, room=room),
            js=_code(js_target, room=room),
            suite=(
                _case(f"target {value}", [_invoke(0, str(value))],
                      [_eq(thermostat, "target_temp", float(value))]),
                _case("target 30", [_invoke(0, "30")],
                      [_eq(thermostat, "target_temp", 30.0),
                       _ev(thermostat, "target_temp", 30.0)]),
            ),
        ))

    py_color = """
        import home

        def fn(data):
            color = data.strip()
            home.set('light_${room}', 'color', color)
            return color
    """
    js_color = """
        const home = require('./home');

        async function fn(data) {
          const color = data.trim();
          await home.set('light_${room}', 'color', color);
          return color;
        }

        module.exports = { fn };
    """
    for room, color in zip(LIGHT_ROOMS,
                           ("red", "blue", "green", "amber", "cool_white")):
        light = f"light_{room}"
        recipes.append(Recipe(
            description=(
                f"Change the {_LABELS[room]} light color to the color name "
                f"I send and echo it back."
            ),
            py=_code(py_color, room=room),
            js=_code(js_color, room=room),
            suite=(
                _case(f"turn {color}", [_invoke(0, color)],
                      [_eq(light, "color", color), _ev(light, "color", color)]),
                _case("turn violet", [_invoke(0, "violet")],
                      [_eq(light, "color", "violet")]),
            ),
        ))

    py_off = """
        import home

        def fn(data):
            home.set('light_${room}', 'power', 'off')
            return 'done'
    """
    js_off = """
        const home = require('./home');

        async function fn(data) {
          await home.set('light_${room}', 'power', 'off');
          return 'done';
        }

        module.exports = { fn };
    """
    for room in ("kitchen", "bathroom", "hallway"):
        light = f"light_{room}"
        recipes.append(Recipe(
            description=(
                f"Whatever I send, make sure the {_LABELS[room]} light ends "
                f"up switched off. Reply 'done'."
            ),
            py=_code(py_off, room=room),
            js=_code(js_off, room=room),
            suite=(
                _case("was on",
                      [_set(0, light, "power", "on"), _invoke(1, "please")],
                      [_eq(light, "power", "off"), _ev(light, "power", "off")]),
                _case("already off", [_invoke(0, "anything")],
                      [_eq(light, "power", "off")]),
            ),
        ))

    py_speaker_on = """
        import home

        def fn(data):
            home.set('speaker_livingroom', 'power', 'on')
            return 'speaker on'
    """
    js_speaker_on = """
        const home = require('./home');

        async function fn(data) {
          await home.set('speaker_livingroom', 'power', 'on');
          return 'speaker on';
        }

        module.exports = { fn };
    """
    recipes.append(Recipe(
        description=(
            "Turn the living room speaker on no matter what message I send, "
            "and reply 'speaker on'."
        ),
        py=_code(py_speaker_on),
        js=_code(js_speaker_on),
        suite=(
            _case("switch on", [_invoke(0, "go")],
                  [_eq("speaker_livingroom", "power", "on"),
                   _ev("speaker_livingroom", "power", "on")]),
            _case("stays on",
                  [_set(0, "speaker_livingroom", "power", "on"),
                   _invoke(1, "again")],
                  [_eq("speaker_livingroom", "power", "on")]),
        ),
    ))

    return recipes


# --- medium tier: three unconditional subtasks ---


def _medium_recipes() -> List[Recipe]:
    recipes: List[Recipe] = []

    py_evening = """
        import home

        def fn(data):
            home.set('light_${lr}', 'power', 'on')
            home.set('light_${lr}', 'brightness', ${b})
            home.set('blinds_${br}', 'position', ${p})
            return 'evening ready'
    """
    js_evening = """
        const home = require('./home');

        async function fn(data) {
          await home.set('light_${lr}', 'power', 'on');
          await home.set('light_${lr}', 'brightness', ${b});
          await home.set('blinds_${br}', 'position', ${p});
          return 'evening ready';
        }

        module.exports = { fn };
    """
    for i in range(7):
        lr = LIGHT_ROOMS[i % 5]
        br = BLINDS_ROOMS[i % 2]
        b = 15 + 5 * i
        p = (i * 7) % 41
        light, blinds = f"light_{lr}", f"blinds_{br}"
        recipes.append(Recipe(
            description=(
                f"When I send 'evening', switch the {_LABELS[lr]} light on, "
                f"dim its brightness to {b}, and move the {_LABELS[br]} "
                f"blinds down to {p}. Reply 'evening ready'."
            ),
            py=_code(py_evening, lr=lr, br=br, b=b, p=p),
            js=_code(js_evening, lr=lr, br=br, b=b, p=p),
            suite=(
                _case("scene applied", [_invoke(0, "evening")],
                      [_eq(light, "power", "on"), _eq(light, "brightness", b),
                       _eq(blinds, "position", p)]),
                _case("step order", [_invoke(0, "evening")],
                      [_order(light, "power", blinds, "position"),
                       _ev(light, "brightness", b)]),
            ),
        ))

    py_leaving = """
        import home

        def fn(data):
            home.set('lock_frontdoor', 'locked', True)
            home.set('light_${lr}', 'power', 'off')
            home.set('thermostat_${tr}', 'target_temp', ${t})
            return 'bye'
    """
    js_leaving = """
        const home = require('./home');

        async function fn(data) {
          await home.set('lock_frontdoor', 'locked', true);
          await home.set('light_${lr}', 'power', 'off');
          await home.set('thermostat_${tr}', 'target_temp', ${t});
          return 'bye';
        }

        module.exports = { fn };
    """
    for i in range(6):
        tr = THERMO_ROOMS[i % 2]
        t = 16 + i
        lr = LIGHT_ROOMS[i % 5]
        light, thermostat = f"light_{lr}", f"thermostat_{tr}"
        recipes.append(Recipe(
            description=(
                f"When I send 'leaving', lock the front door, switch the "
                f"{_LABELS[lr]} light off, and set the {_LABELS[tr]} "
                f"thermostat target to {t} degrees. Answer 'bye'."
            ),
            py=_code(py_leaving, lr=lr, tr=tr, t=t),
            js=_code(js_leaving, lr=lr, tr=tr, t=t),
            suite=(
                _case("everything applied",
                      [_set(0, "lock_frontdoor", "locked", False),
                       _set(0, light, "power", "on"), _invoke(1, "leaving")],
                      [_eq("lock_frontdoor", "locked", True),
                       _eq(light, "power", "off"),
                       _eq(thermostat, "target_temp", float(t))]),
                _case("lock first", [_invoke(0, "leaving")],
                      [_ev("lock_frontdoor", "locked", True),
                       _order("lock_frontdoor", "locked", light, "power")]),
            ),
        ))

    py_music = """
        import home

        def fn(data):
            home.set('speaker_livingroom', 'power', 'on')
            home.set('speaker_livingroom', 'volume', ${v})
            home.set('speaker_livingroom', 'playing', '${track}')
            return 'playing'
    """
    js_music = """
        const home = require('./home');

        async function fn(data) {
          await home.set('speaker_livingroom', 'power', 'on');
          await home.set('speaker_livingroom', 'volume', ${v});
          await home.set('speaker_livingroom', 'playing', '${track}');
          return 'playing';
        }

        module.exports = { fn };
    """
    tracks = ("rainy day jazz", "morning focus", "evening rock", "soft piano")
    for i in range(4):
        v = 25 + 15 * i
        track = tracks[i]
        speaker = "speaker_livingroom"
        recipes.append(Recipe(
            description=(
                f"When I send 'music', turn the living room speaker on, set "
                f"its volume to {v}, and put '{track}' into its playing "
                f"field. Reply 'playing'."
            ),
            py=_code(py_music, v=v, track=track),
            js=_code(js_music, v=v, track=track),
            suite=(
                _case("music on", [_invoke(0, "music")],
                      [_eq(speaker, "power", "on"), _eq(speaker, "volume", v),
                       _eq(speaker, "playing", track)]),
                _case("power before track", [_invoke(0, "music")],
                      [_order(speaker, "power", speaker, "playing"),
                       _ev(speaker, "volume", v)]),
            ),
        ))

    py_morning = """
        import home

        def fn(data):
            home.set('blinds_${br}', 'position', 100)
            home.set('light_${lr}', 'power', 'off')
            home.set('thermostat_${tr}', 'target_temp', ${t})
            return 'good morning'
    """
    js_morning = """
        const home = require('./home');

        async function fn(data) {
          await home.set('blinds_${br}', 'position', 100);
          await home.set('light_${lr}', 'power', 'off');
          await home.set('thermostat_${tr}', 'target_temp', ${t});
          return 'good morning';
        }

        module.exports = { fn };
    """
    for i in range(4):
        br = BLINDS_ROOMS[i % 2]
        lr = LIGHT_ROOMS[(i + 2) % 5]
        tr = THERMO_ROOMS[(i + 1) % 2]
        t = 19 + i
        blinds, light, thermostat = f"blinds_{br}", f"light_{lr}", f"thermostat_{tr}"
        recipes.append(Recipe(
            description=(
                f"When I send 'morning', open the {_LABELS[br]} blinds "
                f"fully, switch the {_LABELS[lr]} light off, and set the "
                f"{_LABELS[tr]} thermostat target to {t}. Reply 'good morning'."
            ),
            py=_code(py_morning, br=br, lr=lr, tr=tr, t=t),
            js=_code(js_morning, br=br, lr=lr, tr=tr, t=t),
            suite=(
                _case("blinds open",
                      [_set(0, blinds, "position", 20), _invoke(1, "morning")],
                      [_eq(blinds, "position", 100), _eq(light, "power", "off"),
                       _eq(thermostat, "target_temp", float(t))]),
                _case("blinds first", [_invoke(0, "morning")],
                      [_ev(blinds, "position", 100),
                       _order(blinds, "position", thermostat, "target_temp")]),
            ),
        ))

    py_night = """
        import home

        def fn(data):
            home.set('lock_frontdoor', 'locked', True)
            home.set('blinds_${br}', 'position', 0)
            home.set('light_${lr}', 'power', 'off')
            return 'good night'
    """
    js_night = """
        const home = require('./home');

        async function fn(data) {
          await home.set('lock_frontdoor', 'locked', true);
          await home.set('blinds_${br}', 'position', 0);
          await home.set('light_${lr}', 'power', 'off');
          return 'good night';
        }

        module.exports = { fn };
    """
    for i in range(4):
        br = BLINDS_ROOMS[i % 2]
        lr = LIGHT_ROOMS[(i + 1) % 5]
        blinds, light = f"blinds_{br}", f"light_{lr}"
        recipes.append(Recipe(
            description=(
                f"When I send 'night', lock the front door, close the "
                f"{_LABELS[br]} blinds completely, and turn the "
                f"{_LABELS[lr]} light off. Reply 'good night'."
            ),
            py=_code(py_night, br=br, lr=lr),
            js=_code(js_night, br=br, lr=lr),
            suite=(
                _case("locked down",
                      [_set(0, "lock_frontdoor", "locked", False),
                       _invoke(1, "night")],
                      [_eq("lock_frontdoor", "locked", True),
                       _eq(blinds, "position", 0), _eq(light, "power", "off")]),
                _case("lock before light", [_invoke(0, "night")],
                      [_order("lock_frontdoor", "locked", light, "power"),
                       _ev(blinds, "position", 0)]),
            ),
        ))

    return recipes


# --- advanced tier: three subtasks with a condition ---


def _advanced_recipes() -> List[Recipe]:
    recipes: List[Recipe] = []

    py_motion = """
        import home

        def fn(data):
            if home.get('motion_${sr}', 'active'):
                home.set('light_${lr}', 'power', 'on')
                home.set('light_${lr}', 'brightness', ${b})
                return 'motion'
            home.set('light_${lr}', 'power', 'off')
            return 'quiet'
    """
    js_motion = """
        const home = require('./home');

        async function fn(data) {
          const active = await home.get('motion_${sr}', 'active');
          if (active) {
            await home.set('light_${lr}', 'power', 'on');
            await home.set('light_${lr}', 'brightness', ${b});
            return 'motion';
          }
          await home.set('light_${lr}', 'power', 'off');
          return 'quiet';
        }

        module.exports = { fn };
    """
    for i in range(6):
        sr = SENSOR_ROOMS[i % 2]
        lr = LIGHT_ROOMS[i % 5]
        b = 40 + 8 * i
        sensor, light = f"motion_{sr}", f"light_{lr}"
        recipes.append(Recipe(
            description=(
                f"If the {_LABELS[sr]} motion sensor is active, switch the "
                f"{_LABELS[lr]} light on and set its brightness to {b}; "
                f"otherwise switch that light off. Reply 'motion' or 'quiet'."
            ),
            py=_code(py_motion, sr=sr, lr=lr, b=b),
            js=_code(js_motion, sr=sr, lr=lr, b=b),
            suite=(
                _case("motion seen",
                      [_fire(0, sensor, True), _invoke(1, "check")],
                      [_eq(light, "power", "on"), _eq(light, "brightness", b)]),
                _case("no motion", [_invoke(0, "check")],
                      [_eq(light, "power", "off"),
                       _still(light, "brightness")]),
            ),
        ))

    py_temp_mode = """
        import home

        def fn(data):
            value = float(data.strip())
            home.set('thermostat_${tr}', 'target_temp', value)
            mode = 'cool' if value > ${th} else 'heat'
            home.set('thermostat_${tr}', 'mode', mode)
            return mode
    """
    js_temp_mode = """
        const home = require('./home');

        async function fn(data) {
          const value = parseFloat(data.trim());
          await home.set('thermostat_${tr}', 'target_temp', value);
          const mode = value > ${th} ? 'cool' : 'heat';
          await home.set('thermostat_${tr}', 'mode', mode);
          return mode;
        }

        module.exports = { fn };
    """
    for i in range(6):
        tr = THERMO_ROOMS[i % 2]
        th = 19 + i
        thermostat = f"thermostat_{tr}"
        recipes.append(Recipe(
            description=(
                f"I will send a temperature number. Set the {_LABELS[tr]} "
                f"thermostat target to that number; if it is above {th}, "
                f"switch the mode to cool, otherwise to heat. Reply with the "
                f"chosen mode."
            ),
            py=_code(py_temp_mode, tr=tr, th=th),
            js=_code(js_temp_mode, tr=tr, th=th),
            suite=(
                _case("hot request", [_invoke(0, str(th + 4))],
                      [_eq(thermostat, "mode", "cool"),
                       _eq(thermostat, "target_temp", float(th + 4))]),
                _case("cold request", [_invoke(0, str(th - 4))],
                      [_eq(thermostat, "mode", "heat"),
                       _eq(thermostat, "target_temp", float(th - 4))]),
            ),
        ))

    py_router = """
        import home

        def fn(data):
            room, _, command = data.partition(':')
            value = 'on' if command.strip().lower() == 'on' else 'off'
            home.set('light_' + room.strip(), 'power', value)
            return room.strip() + ' is ' + value
    """
    js_router = """
        const home = require('./home');

        async function fn(data) {
          const parts = data.split(':');
          const room = parts[0].trim();
          const value = parts[1].trim().toLowerCase() === 'on' ? 'on' : 'off';
          await home.set('light_' + room, 'power', value);
          return room + ' is ' + value;
        }

        module.exports = { fn };
    """
    pairs = (
        ("livingroom", "bedroom"), ("kitchen", "bathroom"),
        ("hallway", "livingroom"), ("bedroom", "kitchen"),
        ("bathroom", "hallway"), ("livingroom", "kitchen"),
    )
    for a, b in pairs:
        light_a, light_b = f"light_{a}", f"light_{b}"
        recipes.append(Recipe(
            description=(
                f"I will send messages like '{a}:on' or '{b}:off'. Switch "
                f"that room's light power accordingly and echo the message "
                f"back."
            ),
            py=_code(py_router),
            js=_code(js_router),
            suite=(
                _case("first room on", [_invoke(0, f"{a}:on")],
                      [_eq(light_a, "power", "on"), _still(light_b)]),
                _case("second room off",
                      [_set(0, light_b, "power", "on"),
                       _invoke(1, f"{b}:off")],
                      [_eq(light_b, "power", "off")]),
                _case("both in order",
                      [_invoke(0, f"{a}:on"), _invoke(1, f"{b}:on")],
                      [_order(light_a, "power", light_b, "power")]),
            ),
        ))

    py_clamp = """
        import home

        def fn(data):
            level = int(data.strip())
            if level > ${limit}:
                level = ${limit}
            home.set('light_${room}', 'power', 'on')
            home.set('light_${room}', 'brightness', level)
            return str(level)
    """
    js_clamp = """
        const home = require('./home');

        async function fn(data) {
          let level = parseInt(data.trim(), 10);
          if (level > ${limit}) {
            level = ${limit};
          }
          await home.set('light_${room}', 'power', 'on');
          await home.set('light_${room}', 'brightness', level);
          return String(level);
        }

        module.exports = { fn };
    """
    for i in range(4):
        room = LIGHT_ROOMS[i % 5]
        limit = 50 + 10 * i
        light = f"light_{room}"
        recipes.append(Recipe(
            description=(
                f"I send a brightness number for the {_LABELS[room]} light. "
                f"If it is greater than {limit}, clamp it to {limit}. Turn "
                f"the light on, apply the brightness, and reply with the "
                f"applied value."
            ),
            py=_code(py_clamp, room=room, limit=limit),
            js=_code(js_clamp, room=room, limit=limit),
            suite=(
                _case("clamped", [_invoke(0, str(limit + 25))],
                      [_eq(light, "brightness", limit),
                       _ev(light, "brightness", limit)]),
                _case("passed through", [_invoke(0, "5")],
                      [_eq(light, "brightness", 5),
                       _eq(light, "power", "on")]),
            ),
        ))

    py_daylight = """
        import home

        def fn(data):
            level = int(data.strip())
            if level > ${th}:
                home.set('blinds_${br}', 'position', 20)
                return 'closed'
            home.set('blinds_${br}', 'position', 90)
            return 'open'
    """
    js_daylight = """
        const home = require('./home');

        async function fn(data) {
          const level = parseInt(data.trim(), 10);
          if (level > ${th}) {
            await home.set('blinds_${br}', 'position', 20);
            return 'closed';
          }
          await home.set('blinds_${br}', 'position', 90);
          return 'open';
        }

        module.exports = { fn };
    """
    for i in range(3):
        br = BLINDS_ROOMS[i % 2]
        th = 55 + 10 * i
        blinds = f"blinds_{br}"
        recipes.append(Recipe(
            description=(
                f"I send the outdoor light level as a number. If it is above "
                f"{th}, move the {_LABELS[br]} blinds down to 20; otherwise "
                f"open them up to 90. Reply 'closed' or 'open'."
            ),
            py=_code(py_daylight, br=br, th=th),
            js=_code(js_daylight, br=br, th=th),
            suite=(
                _case("bright outside", [_invoke(0, str(th + 15))],
                      [_eq(blinds, "position", 20)]),
                _case("dim outside", [_invoke(0, str(th - 15))],
                      [_eq(blinds, "position", 90),
                       _ev(blinds, "position", 90)]),
            ),
        ))

    return recipes


# --- complex tier: one multi-branch orchestration task ---


def _complex_recipes() -> List[Recipe]:
    recipes: List[Recipe] = []

    py_scenes = """
        import home

        def fn(data):
            parts = [part.strip() for part in data.split(':')]
            if len(parts) >= 3 and parts[0] == 'scene' and parts[1] == 'movie':
                level = int(parts[2])
                home.set('light_${lr}', 'power', 'on')
                home.set('light_${lr}', 'brightness', level)
                home.set('blinds_${br}', 'position', 10)
                home.set('speaker_livingroom', 'power', 'on')
                home.set('speaker_livingroom', 'volume', ${v})
                return 'movie at ' + parts[2]
            if len(parts) >= 2 and parts[0] == 'scene' and parts[1] == 'away':
                home.set('lock_frontdoor', 'locked', True)
                home.set('light_${lr}', 'power', 'off')
                home.set('speaker_livingroom', 'power', 'off')
                return 'away'
            return 'unknown'
    """
    js_scenes = """
        const home = require('./home');

        async function fn(data) {
          const parts = data.split(':').map(function (part) { return part.trim(); });
          if (parts.length >= 3 && parts[0] === 'scene' && parts[1] === 'movie') {
            const level = parseInt(parts[2], 10);
            await home.set('light_${lr}', 'power', 'on');
            await home.set('light_${lr}', 'brightness', level);
            await home.set('blinds_${br}', 'position', 10);
            await home.set('speaker_livingroom', 'power', 'on');
            await home.set('speaker_livingroom', 'volume', ${v});
            return 'movie at ' + parts[2];
          }
          if (parts.length >= 2 && parts[0] === 'scene' && parts[1] === 'away') {
            await home.set('lock_frontdoor', 'locked', true);
            await home.set('light_${lr}', 'power', 'off');
            await home.set('speaker_livingroom', 'power', 'off');
            return 'away';
          }
          return 'unknown';
        }

        module.exports = { fn };
    """
    for i in range(9):
        lr = LIGHT_ROOMS[i % 5]
        br = BLINDS_ROOMS[i % 2]
        v = 20 + 5 * i
        light, blinds = f"light_{lr}", f"blinds_{br}"
        recipes.append(Recipe(
            description=(
                f"I send commands like 'scene:movie:35' or 'scene:away'. For "
                f"movie, switch the {_LABELS[lr]} light on with the given "
                f"brightness, move the {_LABELS[br]} blinds to 10, and turn "
                f"the living room speaker on at volume {v}. For away, lock "
                f"the front door, switch the {_LABELS[lr]} light off, and "
                f"turn the speaker off. For anything else change nothing and "
                f"reply 'unknown'."
            ),
            py=_code(py_scenes, lr=lr, br=br, v=v),
            js=_code(js_scenes, lr=lr, br=br, v=v),
            suite=(
                _case("movie scene", [_invoke(0, "scene:movie:35")],
                      [_eq(light, "power", "on"), _eq(light, "brightness", 35),
                       _eq(blinds, "position", 10),
                       _eq("speaker_livingroom", "volume", v)]),
                _case("away scene",
                      [_set(0, "lock_frontdoor", "locked", False),
                       _set(0, light, "power", "on"),
                       _invoke(1, "scene:away")],
                      [_eq("lock_frontdoor", "locked", True),
                       _eq(light, "power", "off"),
                       _eq("speaker_livingroom", "power", "off")]),
                _case("unknown scene", [_invoke(0, "scene:party")],
                      [_still(light), _still("speaker_livingroom"),
                       _still("lock_frontdoor")]),
            ),
        ))

    py_climate = """
        import home

        def fn(data):
            command = data.strip().lower()
            if command == 'day':
                home.set('thermostat_${tr}', 'target_temp', ${day})
                home.set('thermostat_${tr}', 'mode', 'heat')
                home.set('blinds_${br}', 'position', 100)
                return 'day'
            home.set('thermostat_${tr}', 'target_temp', ${night})
            home.set('thermostat_${tr}', 'mode', 'off')
            home.set('blinds_${br}', 'position', 0)
            return 'night'
    """
    js_climate = """
        const home = require('./home');

        async function fn(data) {
          const command = data.trim().toLowerCase();
          if (command === 'day') {
            await home.set('thermostat_${tr}', 'target_temp', ${day});
            await home.set('thermostat_${tr}', 'mode', 'heat');
            await home.set('blinds_${br}', 'position', 100);
            return 'day';
          }
          await home.set('thermostat_${tr}', 'target_temp', ${night});
          await home.set('thermostat_${tr}', 'mode', 'off');
          await home.set('blinds_${br}', 'position', 0);
          return 'night';
        }

        module.exports = { fn };
    """
    for i in range(8):
        tr = THERMO_ROOMS[i % 2]
        br = BLINDS_ROOMS[(i + 1) % 2]
        day = 20 + i % 4
        night = 16 + i % 3
        thermostat, blinds = f"thermostat_{tr}", f"blinds_{br}"
        recipes.append(Recipe(
            description=(
                f"I send 'day' or 'night'. For day, set the {_LABELS[tr]} "
                f"thermostat target to {day} with mode heat and open the "
                f"{_LABELS[br]} blinds to 100. For night, set the target to "
                f"{night}, switch the mode off, and close those blinds to 0. "
                f"Reply with the program you applied."
            ),
            py=_code(py_climate, tr=tr, br=br, day=day, night=night),
            js=_code(js_climate, tr=tr, br=br, day=day, night=night),
            suite=(
                _case("day program", [_invoke(0, "day")],
                      [_eq(thermostat, "target_temp", float(day)),
                       _eq(thermostat, "mode", "heat"),
                       _eq(blinds, "position", 100),
                       _order(thermostat, "target_temp", blinds, "position")]),
                _case("night program", [_invoke(0, "night")],
                      [_eq(thermostat, "target_temp", float(night)),
                       _eq(thermostat, "mode", "off"),
                       _eq(blinds, "position", 0)]),
            ),
        ))

    py_security = """
        import home

        ROOMS = ['livingroom', 'bedroom', 'kitchen', 'bathroom', 'hallway']

        def fn(data):
            command = data.strip().lower()
            if command == 'arm':
                home.set('lock_frontdoor', 'locked', True)
                for room in ROOMS:
                    home.set('light_' + room, 'power', 'off')
                return 'armed'
            home.set('lock_frontdoor', 'locked', False)
            home.set('light_${lr}', 'power', 'on')
            home.set('light_${lr}', 'brightness', ${b})
            return 'welcome'
    """
    js_security = """
        const home = require('./home');

        const ROOMS = ['livingroom', 'bedroom', 'kitchen', 'bathroom', 'hallway'];

        async function fn(data) {
          const command = data.trim().toLowerCase();
          if (command === 'arm') {
            await home.set('lock_frontdoor', 'locked', true);
            for (const room of ROOMS) {
              await home.set('light_' + room, 'power', 'off');
            }
            return 'armed';
          }
          await home.set('lock_frontdoor', 'locked', false);
          await home.set('light_${lr}', 'power', 'on');
          await home.set('light_${lr}', 'brightness', ${b});
          return 'welcome';
        }

        module.exports = { fn };
    """
    for i in range(8):
        lr = LIGHT_ROOMS[i % 5]
        b = 30 + 7 * i
        light = f"light_{lr}"
        recipes.append(Recipe(
            description=(
                f"I send 'arm' or 'disarm'. For arm, lock the front door and "
                f"switch every light off: living room, bedroom, kitchen, "
                f"bathroom and hallway; reply 'armed'. For disarm, unlock "
                f"the door and switch the {_LABELS[lr]} light on at "
                f"brightness {b}; reply 'welcome'."
            ),
            py=_code(py_security, lr=lr, b=b),
            js=_code(js_security, lr=lr, b=b),
            suite=(
                _case("armed",
                      [_set(0, "lock_frontdoor", "locked", False),
                       _set(0, "light_kitchen", "power", "on"),
                       _invoke(1, "arm")],
                      [_eq("lock_frontdoor", "locked", True),
                       _eq("light_kitchen", "power", "off"),
                       _eq("light_hallway", "power", "off")]),
                _case("disarmed", [_invoke(0, "disarm")],
                      [_eq("lock_frontdoor", "locked", False),
                       _eq(light, "power", "on"),
                       _eq(light, "brightness", b),
                       _ev("lock_frontdoor", "locked", False)]),
            ),
        ))

    return recipes


_TIER_BUILDERS = {
    "easy": _easy_recipes,
    "medium": _medium_recipes,
    "advanced": _advanced_recipes,
    "complex": _complex_recipes,
}


def _check_runtime(runtime: str) -> None:
    if runtime not in ("python3", "nodejs"):
        raise ValueError(f"unknown runtime {runtime!r}")


def _recipe_code(recipe: Recipe, runtime: str) -> str:
    return recipe.py if runtime == "python3" else recipe.js


def build_corpus(runtime: str, per_tier: int = 25) -> CorpusBundle:
    """Full graded corpus plus the provider fixture table that answers it."""
    _check_runtime(runtime)
    tasks: List[TaskSpec] = []
    rows: List[dict] = []
    salt = 0
    for tier, builder in _TIER_BUILDERS.items():
        recipes = builder()
        if per_tier > len(recipes):
            raise ValueError(
                f"{tier} tier has only {len(recipes)} tasks, "
                f"{per_tier} requested"
            )
        for index, recipe in enumerate(recipes[:per_tier], start=1):
            task_id = f"{tier}-{index:02d}"
            tasks.append(TaskSpec(
                task_id=task_id,
                complexity=tier,
                description_text=recipe.description,
                runtime=runtime,
                semantic_suite=recipe.suite,
                subtask_count=3 if tier in ("medium", "advanced") else 1,
            ))
            rows.append({
                "key": task_id,
                "match": recipe.description,
                "variants": [_respond(_recipe_code(recipe, runtime),
                                      runtime, salt)],
            })
            salt += 1
    descriptions = [task.description_text for task in tasks]
    if len(set(descriptions)) != len(descriptions):
        raise AssertionError("corpus descriptions must be unique")
    return CorpusBundle(tuple(tasks), {"delay": 0.0, "tasks": rows})


# --- deliberately broken response sets ---


def _broken_import(code: str, runtime: str) -> str:
    if runtime == "python3":
        return code.replace(
            "import home\n", "import home\nimport home.extras\n", 1
        )
    return code.replace(
        "const home = require('./home');\n",
        "const home = require('./home');\n"
        "const extras = require('./missing_helper');\n",
        1,
    )


_PY_DATA_BODIES = (
    "import home\n\ndef fn(data):\n    settings = None\n"
    "    return settings['mode']\n",
    "import home\n\ndef fn(data):\n    table = {}\n"
    "    return table['command']\n",
    "import home\n\ndef fn(data):\n    items = []\n    return items[0]\n",
    "import home\n\ndef fn(data):\n    return data.command\n",
    "import home\n\ndef fn(data):\n    return data + 5\n",
)

_JS_DATA_BODIES = (
    "const home = require('./home');\n\nasync function fn(data) {\n"
    "  let settings;\n  return settings.mode;\n}\n\nmodule.exports = { fn };\n",
    "const home = require('./home');\n\nasync function fn(data) {\n"
    "  const table = {};\n  return table.command.length;\n}\n\n"
    "module.exports = { fn };\n",
    "const home = require('./home');\n\nasync function fn(data) {\n"
    "  const items = [];\n  return items[0].length;\n}\n\n"
    "module.exports = { fn };\n",
    "const home = require('./home');\n\nasync function fn(data) {\n"
    "  return data.reverse();\n}\n\nmodule.exports = { fn };\n",
    "const home = require('./home');\n\nasync function fn(data) {\n"
    "  return data.map(function (x) { return x; });\n}\n\n"
    "module.exports = { fn };\n",
)

_PY_MISSING_NAMES = ("run", "handler", "main", "handle")
_JS_MISSING_NAMES = ("run", "handler", "main", "handle")

_PROSE_RESPONSES = (
    "I would wire the living room lamp to a smart relay and schedule it from "
    "your phone. A licensed electrician can install the relay in under an "
    "hour, and you get manual override for free.",
    "That automation sounds useful. Check whether your hub supports scenes; "
    "most do, and then this becomes a configuration task rather than "
    "something that needs programming.",
    "Unfortunately I cannot help with controlling the devices directly, but "
    "consider grouping the lights in the vendor app and using its built-in "
    "timer feature instead.",
)


def _missing_code(runtime: str, name: str) -> str:
    if runtime == "python3":
        return f"import home\n\ndef {name}(data):\n    return 'ok'\n"
    return (
        "const home = require('./home');\n\n"
        f"async function {name}(data) {{\n  return 'ok';\n}}\n\n"
        f"module.exports = {{ {name} }};\n"
    )


def build_defect_corpus(runtime: str) -> CorpusBundle:
    """Twenty easy-tier tasks whose canned responses are seeded with known
    defects, laid out per _DEFECT_LAYOUT. The expected failure histogram is
    DEFECT_HISTOGRAM."""
    _check_runtime(runtime)
    base = _easy_recipes()[:len(_DEFECT_LAYOUT)]
    tasks: List[TaskSpec] = []
    rows: List[dict] = []
    counters = {"data": 0, "missing": 0, "prose": 0}
    for index, (recipe, kind) in enumerate(zip(base, _DEFECT_LAYOUT), start=1):
        task_id = f"defect-{index:02d}"
        if kind == "import":
            code = _broken_import(_recipe_code(recipe, runtime), runtime)
            response = _respond(code, runtime, index)
        elif kind == "data":
            bodies = _PY_DATA_BODIES if runtime == "python3" else _JS_DATA_BODIES
            response = _respond(bodies[counters["data"]], runtime, index)
            counters["data"] += 1
        elif kind == "missing":
            names = (_PY_MISSING_NAMES if runtime == "python3"
                     else _JS_MISSING_NAMES)
            response = _respond(
                _missing_code(runtime, names[counters["missing"]]),
                runtime, index,
            )
            counters["missing"] += 1
        else:
            response = _PROSE_RESPONSES[counters["prose"]]
            counters["prose"] += 1
        tasks.append(TaskSpec(
            task_id=task_id,
            complexity="easy",
            description_text=recipe.description,
            runtime=runtime,
            semantic_suite=recipe.suite,
        ))
        rows.append({
            "key": task_id,
            "match": recipe.description,
            "variants": [response],
        })
    return CorpusBundle(tuple(tasks), {"delay": 0.0, "tasks": rows})


def build_repeat_bundle(runtime: str,
                        broken_slot: int = 8) -> Tuple[TaskSpec, dict]:
    """One task with a ten-entry variant table: nine good responses and one
    import-broken one. Which repetition draws the broken entry depends only
    on the provider's seed; the default slot is one that a seed of 42 hits
    exactly once in ten draws, so the pass pattern is mixed."""
    _check_runtime(runtime)
    recipe = _easy_recipes()[0]
    task = TaskSpec(
        task_id="repeat-01",
        complexity="easy",
        description_text=recipe.description,
        runtime=runtime,
        semantic_suite=recipe.suite,
    )
    code = _recipe_code(recipe, runtime)
    good = _respond(code, runtime, 0)
    broken = _respond(_broken_import(code, runtime), runtime, 1)
    variants = [good] * 10
    variants[broken_slot] = broken
    fixtures = {
        "delay": 0.0,
        "tasks": [{
            "key": task.task_id,
            "match": task.description_text,
            "variants": variants,
        }],
    }
    return task, fixtures


def write_corpus(bundle: CorpusBundle,
                 out_dir: Union[str, Path]) -> Tuple[Path, Path]:
    """Materialize dataset.json and fixtures.json under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset_path = dump_dataset(bundle.tasks, out_dir / "dataset.json")
    fixtures_path = out_dir / "fixtures.json"
    fixtures_path.write_text(
        json.dumps(bundle.fixtures, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return dataset_path, fixtures_path
