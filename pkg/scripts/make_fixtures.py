#!/usr/bin/env python3
"""Regenerate the bundled corpora, replay files, and event payloads.

Everything here is deterministic (no RNG): rerunning the script reproduces
the committed fixtures byte for byte. The Luding replay encodes the bundled
golden deaths sequence (7, 21, 30, 38, 40, 46, 50, 66 at hours 3.0, 4.1,
7.0, 9.2, 9.2, 10.9, 11.4, 15.6) that the acceptance suite replays.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "quaketruth" / "fixtures"

# ---------------------------------------------------------------------------
# classifier corpora

PLACES = ["Ludington", "Anshun", "Jacmel", "Cavaillon", "Manila", "Luzon",
          "Taipei", "Michoacan", "Wau", "Khowy", "Cianjur", "Mirebalais"]
ZH_PLACES = ["康定", "雅安", "汶川", "西昌", "石棉", "天全"]
COUNTS = [3, 5, 9, 13, 17, 23, 34, 57, 89, 143, 260, 410, 780, 1430, 2600]

# News-register earthquake reporting (witness chatter, official updates,
# hospital tallies, revised figures) across the languages the replays use.
EVENT_POSITIVE = [
    "{n} dead after the earthquake in {p}, rescue underway",
    "Strong earthquake hits {p}, buildings damaged",
    "Magnitude 6.2 quake strikes near {p}",
    "Rescue teams search rubble after {p} earthquake",
    "Death toll rises after quake in {p}",
    "{n} killed in {p} earthquake",
    "Aftershocks continue in {p} following the quake",
    "At least {n} injured as earthquake shakes {p}",
    "At least {n} dead in {p} earthquake, dozens injured",
    "Shaking felt across {p} after strong quake",
    "Officials confirm quake damage in {p}",
    "Update: {n} died as quake toll rises in {p}",
    "Rescue HQ reports {n} dead after {p} earthquake",
    "{n} dead now confirmed in {p}, numbers still rising",
    "Hospitals in {p} county report {n} injured tonight",
    "County hospital tally: {n} injured across {p}",
    "{n} dead confirmed by emergency office in {p}",
    "Standing by the {n} dead figure in {p} tonight",
    "Confirmed: {n} dead in {p} so far",
    "{p} quake death figure revised: {n} killed",
    "Provincial headquarters: {n} killed in {p} earthquake",
    "Some outlets now say {n} dead in {p} quake",
    "{n} killed in the {p} earthquake per provincial tv",
    "Officials now confirm {n} died in the {p} quake",
    "So far {n} reported deaths after the quake near {p}",
    "Death toll climbs to {n} in {p} earthquake",
    "Civil protection says {n} killed in {p} quake",
    "Massive earthquake just hit {p}, buildings down",
    "{p} earthquake: {n} killed, hundreds hurt",
    "Quake survivors sleeping outdoors in {p} tonight",
    "Local officials confirm {n} killed in {p} quake",
    "Earthquake emergency response activated for {p}",
    "Seismic damage assessment continues in {p}",
    "Landslides block roads to quake-hit {p}",
    "Terremoto en {p}: {n} muertos",
    "Fuerte sismo sacude {p}",
    "Más de {n} heridos tras el terremoto en {p}",
    "Videos muestran muros colapsados tras el sismo en {p}",
    "Séisme en {p} : {n} morts selon la protection civile",
    "Bilan du séisme : {n} morts recensés en {p}",
    "Un fort tremblement de terre frappe {p}",
    "Des répliques continuent près de {p}",
    "Tranblemanntè a kraze anpil kay nan {p}",
    "Anpil moun blese nan tranblemanntè {p} a",
    "Tranblemanntè a fò anpil nan {p}",
    "{z}地震已致{n}人死亡",
    "{z}地震造成{n}人遇难",
    "{z}发生强烈地震，震感明显",
    "{z}地震后救援队连夜搜救",
    "地震已造成{n}人受伤，救援正在进行",
    "{z}で地震発生、被害状況を確認中",
]

EVENT_NEGATIVE = [
    "Two killed in highway crash near {p}",
    "{n} killed in highway crash near {p} this morning",
    "Bus accident leaves {n} dead in {p}",
    "{n} dead in bus plunge near {p}",
    "Covid deaths rise to {n} in {p}",
    "{n} new covid cases reported in {p} today",
    "Hurricane makes landfall near {p}, thousands evacuated",
    "Hurricane kills {n} in {p}, damage in the millions",
    "Flash flood kills {n} near {p}",
    "Building fire in {p} leaves {n} dead",
    "Factory explosion injures {n} workers in {p}",
    "Lovely weather in {p} today",
    "Our team won the match in {p} last night",
    "Stock markets rally as tech shares jump in {p}",
    "New restaurant opening downtown {p} this weekend",
    "Flood waters rise after heavy rain in {p}",
    "Wildfire burns homes outside {p}",
    "Best crypto signals, join now and win big",
    "Giveaway! follow and retweet to win a trip to {p}",
    "Traffic jam on the ring road around {p} again",
    "Police report {n} arrests after the {p} protest",
    "Heatwave warning issued for {p} this week",
    "Accidente de autobús deja {n} muertos en {p}",
    "Semana de la moda comienza en {p}",
    "Accident de la route : {n} morts près de {p}",
    "Festival de musique à {p} ce weekend",
    "{z}车祸致{n}人死亡",
    "{z}今天天气晴朗，适合出游",
    "{z}新增{n}例确诊病例",
    "Bon fèt tout moun nan {p}",
    "Typhoon brings heavy rain to {p} coast",
    "Election results announced in {p} province",
]

STATS_POSITIVE = [
    "{n} dead after the earthquake in {p}",
    "{n} dead after the earthquake in {p}, rescue underway",
    "{n} killed in {p} quake",
    "At least {n} injured in {p}",
    "At least {n} dead in {p} earthquake, dozens injured",
    "Death toll climbs to {n} in {p}",
    "{n} people died as buildings collapsed in {p}",
    "Hospitals report {n} injured across {p}",
    "Hospitals in {p} county report {n} injured tonight",
    "County hospital tally: {n} injured across {p}",
    "Officials now confirm {n} died in the {p} quake",
    "Rescue HQ reports {n} dead after {p} earthquake",
    "{n} dead now confirmed in {p}, numbers still rising",
    "{n} dead confirmed by emergency office in {p}",
    "Standing by the {n} dead figure in {p} tonight",
    "Confirmed: {n} dead in {p} so far",
    "{p} quake death figure revised: {n} killed",
    "Provincial headquarters: {n} killed in {p} earthquake",
    "Some outlets now say {n} dead in {p} quake",
    "{n} killed in the {p} earthquake per provincial tv",
    "Update: {n} died as quake toll rises in {p}",
    "{p} earthquake: {n} killed, hundreds hurt",
    "Local officials confirm {n} killed in {p} quake",
    "So far {n} reported deaths in {p}",
    "So far {n} reported deaths after the quake near {p}",
    "Civil protection says {n} killed in {p} quake",
    "{n} morts selon les autorités à {p}",
    "Séisme en {p} : {n} morts selon la protection civile",
    "Bilan du séisme : {n} morts recensés en {p}",
    "Séisme : {n} blessés recensés à {p}",
    "{n} muertos tras el sismo en {p}",
    "Más de {n} heridos tras el terremoto en {p}",
    "{z}地震已致{n}人死亡",
    "{z}地震造成{n}人遇难",
    "已有{n}人受伤送医",
    "Bus crash leaves {n} dead near {p}",
    "Storm killed {n} and injured dozens in {p}",
]

STATS_NEGATIVE = [
    "Strong earthquake hits {p}, buildings damaged",
    "Shaking felt across {p} after the quake",
    "Power is out across {p} after the earthquake",
    "Rescue teams searching rubble in {p} tonight",
    "Rescue HQ deploys teams to {p}",
    "Emergency office holds briefing on {p} earthquake",
    "Provincial tv covering the {p} earthquake all night",
    "Hospitals in {p} on alert after the quake",
    "Praying for everyone in {p} tonight",
    "Aftershocks continue near {p}",
    "Roads cracked near {p} but no word on casualties",
    "Death toll still unknown in {p}",
    "No casualties reported in {p} so far",
    "My house shook for a full minute here in {p}",
    "Magnitude 6.8 earthquake reported near {p}, awaiting damage reports",
    "Magnitude 5.4 aftershock recorded near {p}",
    "Emergency response activated for the {p} earthquake",
    "Quake survivors sleeping outdoors in {p} tonight",
    "Huge shaking just now in {p}, hope everyone is safe",
    "Massive earthquake just hit {p}, buildings down",
    "Fuerte sismo sacude {p} esta noche",
    "Videos muestran muros colapsados en {p}",
    "Un fort tremblement de terre frappe {p}",
    "Des répliques continuent près de {p}",
    "{z}发生强烈地震，震感明显",
    "{z}地震后救援队连夜搜救",
    "Tranblemanntè a fò anpil nan {p}",
    "Anpil kay kraze nan {p}, priye pou nou",
    "Videos show collapsed walls in {p}",
    "No numbers yet from {p}, stay safe everyone",
]


def _fill(templates: list[str], label: str) -> list[tuple[str, str]]:
    rows = []
    for index, template in enumerate(templates):
        for offset in range(4):  # four variants per template
            place = PLACES[(index + 3 * offset + 1) % len(PLACES)]
            zh_place = ZH_PLACES[(index + 2 * offset) % len(ZH_PLACES)]
            count = COUNTS[(index * 3 + 7 * offset) % len(COUNTS)]
            rows.append((template.format(p=place, n=count, z=zh_place), label))
    return rows


def write_corpora() -> None:
    corpus_dir = FIXTURES / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    for name, positive, negative, pos_label, neg_label in (
        ("event.csv", EVENT_POSITIVE, EVENT_NEGATIVE, "relevant", "irrelevant"),
        ("stats.csv", STATS_POSITIVE, STATS_NEGATIVE, "has-stats", "no-stats"),
    ):
        rows = _fill(positive, pos_label) + _fill(negative, neg_label)
        with open(corpus_dir / name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["text", "label"])
            writer.writerows(rows)


# ---------------------------------------------------------------------------
# replay fixtures

LUDING_ORIGIN = datetime(2022, 9, 5, 4, 52, tzinfo=timezone.utc)
HAITI_ORIGIN = datetime(2021, 8, 14, 12, 29, tzinfo=timezone.utc)


def _post(origin: datetime, pid: str, hours: float, source: str, text: str,
          platform: str = "social", verified: bool = False, language: str = "en",
          is_forward: bool = False, links: list[str] | None = None) -> dict:
    ts = origin + timedelta(seconds=round(hours * 3600))
    return {
        "post_id": pid,
        "source_account": source,
        "platform": platform,
        "verified": verified,
        "timestamp": ts.isoformat().replace("+00:00", "Z"),
        "language": language,
        "text": text,
        "is_forward": is_forward,
        "cited_links": links or [],
    }


def luding_posts() -> list[dict]:
    P = lambda *a, **k: _post(LUDING_ORIGIN, *a, **k)
    return [
        # pre-claim chatter; the crash post must be culled by the event stage
        P("l-c1", 0.2, "u_chn1", "成都发生强烈地震，震感明显，大家注意安全", language="zh"),
        P("l-c2", 0.4, "u_int1", "Huge shaking just now in Chengdu, hope everyone is safe"),
        P("l-c3", 0.8, "u_int2", "Magnitude 6.8 earthquake reported near Luding, Sichuan, awaiting damage reports"),
        P("l-c4", 1.3, "u_spam", "Best crypto signals, join now and win big"),
        P("l-c5", 1.7, "u_acc", "Two killed in highway crash near Chengdu this morning"),
        P("l-c6", 2.2, "u_pray", "Oraciones por Sichuan esta noche", language="es"),
        # deaths 7 at 3.0h, plus a platform-marked forward of it
        P("l-d7a", 3.0, "wit_a", "7 dead after the earthquake in Luding, rescue underway"),
        P("l-d7f", 3.2, "fwd_1", "7 dead after the earthquake in Luding, rescue underway", is_forward=True),
        # deaths 21 at 4.1h (two verified accounts)
        P("l-d21a", 4.1, "med_b", "At least 21 dead in Luding earthquake, dozens injured", verified=True),
        P("l-d21b", 4.15, "med_c", "Local officials confirm 21 killed in Sichuan quake", verified=True),
        # injuries 50 at 4.6h
        P("l-i50", 4.6, "hosp_v", "Hospitals in Luding county report 50 injured tonight", verified=True),
        # corroboration keeps 21 current without a new emission
        P("l-cor21", 5.1, "u_int1", "Confirmed: 21 dead in Luding so far"),
        # deaths 30 at 7.0h
        P("l-d30a", 7.0, "news_cn", "Officials say 30 killed in Luding, Sichuan earthquake", platform="news", verified=True),
        P("l-d30b", 7.05, "wit_a", "30 dead in Luding earthquake, many still trapped"),
        # deaths 38 at 9.2h (two sources) and a first 40 report at the same hour
        P("l-d38a", 9.2, "med_b", "Update: 38 died as quake toll rises in Luding", verified=True),
        P("l-d38b", 9.21, "wit_e", "38 killed in the Sichuan earthquake per provincial tv"),
        P("l-d40a", 9.2, "u_int2", "Some outlets now say 40 dead in Luding quake"),
        # deaths 40 takes over at 9.6h; earliest report stays 9.2h
        P("l-d40b", 9.6, "med_g", "Provincial headquarters: 40 killed in Luding earthquake", verified=True),
        P("l-d40c", 9.65, "news_h", "40 dead confirmed by emergency office in Sichuan", platform="news"),
        # injuries 248 at 9.7h
        P("l-i248", 9.7, "hosp_v", "County hospital tally: 248 injured across Luding", verified=True),
        # deaths 46 at 10.9h (three sources, one Chinese)
        P("l-d46a", 10.9, "wit_a", "46 dead now confirmed in Luding, numbers still rising"),
        P("l-d46b", 10.92, "med_c", "Sichuan quake: 46 killed, hundreds hurt", verified=True),
        P("l-d46zh", 10.95, "zh_med", "泸定地震已致46人死亡", language="zh", verified=True),
        # deaths 50 at 11.4h
        P("l-d50a", 11.4, "news_d", "Rescue HQ reports 50 dead after Luding earthquake", platform="news", verified=True),
        P("l-d50b", 11.45, "wit_e", "50 killed in Sichuan quake as of tonight"),
        P("l-cor50", 13.0, "u_int1", "Standing by the 50 dead figure in Luding tonight"),
        # deaths 66 at 15.6h
        P("l-d66a", 15.6, "med_b", "66 dead in Luding earthquake, state media says", verified=True),
        P("l-d66b", 15.62, "news_f", "Sichuan quake death figure revised: 66 killed", platform="news"),
        P("l-d66c", 15.65, "med_g", "Officials now confirm 66 died in the Luding quake", verified=True),
    ]


def haiti_posts() -> list[dict]:
    P = lambda *a, **k: _post(HAITI_ORIGIN, *a, **k)
    return [
        P("h-c1", 0.3, "ht_wit1", "Tranblemanntè a fò anpil nan Okay", language="ht"),
        P("h-c2", 0.5, "en_wit1", "Massive earthquake just hit Haiti, buildings down in Les Cayes"),
        P("h-c3", 0.7, "ht_wit2", "Anpil kay kraze nan Okay, priye pou nou", language="ht"),
        P("h-c4", 1.0, "fr_wit1", "Un fort tremblement de terre frappe Haïti ce matin", language="fr"),
        P("h-c5", 1.2, "es_wit1", "Fuerte sismo sacude Haití esta mañana", language="es"),
        P("h-c6", 1.5, "und_1", "😭😭😭", language="und"),
        P("h-c7", 2.0, "en_wit2", "Shaking felt across Port-au-Prince after strong quake"),
        P("h-c8", 2.4, "fr_wit2", "Des répliques continuent près des Cayes", language="fr"),
        P("h-c9", 3.0, "ht_wit3", "Priye pou Ayiti jodi a", language="ht"),
        P("h-d29a", 4.0, "en_med1", "So far 29 reported deaths after the quake near Les Cayes", verified=True),
        P("h-d29b", 4.2, "en_med2", "29 dead reported in southern Haiti earthquake", verified=True),
        P("h-i500", 6.0, "es_med1", "Más de 500 heridos tras el terremoto en Haití", language="es", verified=True),
        P("h-c10", 7.0, "en_wit3", "Rescue teams searching rubble in Les Cayes tonight"),
        P("h-d304a", 8.3, "fr_med1", "Séisme en Haïti : 304 morts selon la protection civile", language="fr", verified=True),
        P("h-d304b", 8.5, "fr_med2", "Bilan du séisme : 304 morts recensés en Haïti", language="fr", verified=True),
        P("h-c11", 9.0, "es_wit2", "Videos muestran muros colapsados en Les Cayes", language="es"),
        P("h-c12", 10.0, "en_wit4", "Power is out across Les Cayes after the earthquake"),
        P("h-d2189a", 20.5, "en_med1", "Death toll climbs to 2,189 in Haiti earthquake", verified=True),
        P("h-d2189b", 20.7, "en_med3", "Civil protection says 2,189 killed in Haiti quake", platform="news", verified=True),
    ]


def write_replays() -> None:
    replays = FIXTURES / "replays"
    replays.mkdir(parents=True, exist_ok=True)
    for name, posts in (("luding_2022.jsonl", luding_posts()),
                        ("haiti_sample.jsonl", haiti_posts())):
        with open(replays / name, "w", encoding="utf-8") as fh:
            for post in posts:
                fh.write(json.dumps(post, ensure_ascii=False) + "\n")


def write_event_payloads() -> None:
    events = FIXTURES / "events"
    events.mkdir(parents=True, exist_ok=True)
    luding = {
        "event_id": "luding-2022",
        "magnitude": 6.8,
        "region_names": ["Luding", "Sichuan", "China", "泸定", "四川", "Ganzi"],
        "origin_time": LUDING_ORIGIN.isoformat().replace("+00:00", "Z"),
        "mode": "replay",
        "replay_file": "src/quaketruth/fixtures/replays/luding_2022.jsonl",
        "prior_median_deaths": 50.0,
        "prior_dispersion_log10": 0.4,
        "sigma_obs": 0.3,
    }
    haiti = {
        "event_id": "haiti-2021",
        "magnitude": 7.2,
        "region_names": ["Haiti", "Les Cayes", "Ouest", "Sud", "Ayiti", "Haïti"],
        "origin_time": HAITI_ORIGIN.isoformat().replace("+00:00", "Z"),
        "mode": "replay",
        "replay_file": "src/quaketruth/fixtures/replays/haiti_sample.jsonl",
        "prior_median_deaths": 1000.0,
        "prior_dispersion_log10": 1.2,
        "sigma_obs": 0.2,
    }
    (events / "luding.json").write_text(json.dumps(luding, ensure_ascii=False, indent=2) + "\n", "utf-8")
    (events / "haiti.json").write_text(json.dumps(haiti, ensure_ascii=False, indent=2) + "\n", "utf-8")


if __name__ == "__main__":
    write_corpora()
    write_replays()
    write_event_payloads()
    print(f"fixtures written under {FIXTURES}")
