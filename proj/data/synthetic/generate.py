#!/usr/bin/env python3
"""Writes pairs120.jsonl: a small EN->ZH corpus for evidence selection.

meta.intent records what each pair was built to exercise:
  pos            BE passive -> BEI passive in a negative context
  neg            BE passive -> active or topic sentence, neutral context
  no-be          no BE passive on the source side
  bei-positive   BEI passive in a favourable context
  bei-neutral    BEI passive in a neutral context
  active-neg     active target, negative context
"""
import json
import pathlib

VICTIMS = [
    ("The old man", "老人"),
    ("The boy", "那个孩子"),
    ("My brother", "我哥哥"),
    ("The farmer", "农民"),
    ("The young woman", "那个姑娘"),
]
ATTACKS = [
    ("beaten", "the soldiers", "打伤", "士兵"),
    ("robbed", "the bandits", "抢走了钱包", "土匪"),
    ("cheated", "his neighbour", "欺骗", "邻居"),
    ("dragged out", "the police", "拖出去", "警察"),
    ("attacked", "the enemy", "袭击", "敌人"),
    ("insulted", "the boss", "侮辱", "老板"),
    ("abandoned", "his friends", "抛弃", "朋友"),
    ("arrested", "the police", "逮捕", "警察"),
    ("trapped", "the fire", "困住", "大火"),
    ("bitten", "a dog", "咬伤", "狗"),
]
AFTERMATH = [
    ("and cried in pain", "痛苦地哭了"),
    ("and nearly died", "差点死了"),
    ("and the night was terrible", "那一夜非常可怕"),
    ("and everyone was afraid", "大家都很害怕"),
    ("and suffered for years", "痛苦了很多年"),
]

THINGS = [
    ("The letter", "这封信", "written", "my friend", "写", "我朋友"),
    ("The house", "房子", "built", "the workers", "建造", "工人们"),
    ("The bridge", "那座桥", "repaired", "the villagers", "修好", "村民"),
    ("The book", "这本书", "translated", "my teacher", "翻译", "我的老师"),
    ("The photos", "照片", "kept", "my mother", "保存", "我母亲"),
    ("The room", "房间", "cleaned", "the students", "打扫", "学生们"),
    ("The report", "报告", "finished", "the manager", "完成", "经理"),
    ("The plan", "计划", "arranged", "the teacher", "安排", "老师"),
]
NEUTRAL_FRAMES = [
    ("{S} was {V} by {A}.", "{Az}{Vz}了{Sz}。"),
    ("{S} was {V} by {A} last week.", "上周{Az}{Vz}了{Sz}。"),
    ("{S} has been {V} by {A}.", "{Sz}是{Az}{Vz}的。"),
    ("{S} was {V} yesterday.", "{Sz}昨天{Vz}好了。"),
    ("{S} was already {V}.", "{Sz}已经{Vz}好了。"),
]

NO_BE = [
    ("The soldiers beat the old man.", "士兵打伤了老人。"),
    ("He slept well last night.", "他昨晚睡得很好。"),
    ("She got fired last year.", "她去年被开除了。"),
    ("My friend wrote a letter.", "我朋友写了一封信。"),
    ("The children played in the garden.", "孩子们在花园里玩。"),
    ("It is what it is.", "事已至此。"),
    ("The dog bit the boy.", "狗咬伤了那个孩子。"),
    ("We will meet tomorrow.", "我们明天见。"),
    ("The teacher praised my work.", "老师表扬了我的作业。"),
    ("He has a warm quilt.", "他有一床被子。"),
]
BEI_POSITIVE = [
    ("I was praised by my teacher.", "我被老师表扬了。"),
    ("The girl was praised by everyone.", "那个女孩被大家称赞。"),
    ("He was welcomed by the villagers.", "他被村民欢迎。"),
    ("She was loved by her students.", "她被学生们爱戴。"),
    ("The doctor was honoured by the city.", "医生被城市表彰了。"),
    ("The boy was rewarded by his father.", "那个孩子被父亲奖励了。"),
    ("My mother was respected by her neighbours.", "我母亲被邻居尊重。"),
    ("The singer was admired by many people.", "那个歌手被许多人称赞。"),
]
BEI_NEUTRAL = [
    ("The book was taken by my brother.", "书被哥哥拿走了。"),
    ("The car was moved by the driver.", "车被司机开走了。"),
    ("The chairs were carried by the students.", "椅子被学生们抬走了。"),
    ("The documents were sent to the office.", "文件被送到办公室。"),
    ("The tea was served by the host.", "茶被主人端上来了。"),
    ("The files were organized by the secretary.", "文件被秘书整理好了。"),
]
ACTIVE_NEG = [
    ("He was hurt in the war and suffered terribly.", "他在战争中受了伤，非常痛苦。"),
    ("She was criticized by the teacher.", "她受到了老师的批评。"),
    ("The village was destroyed in the terrible storm.", "可怕的暴风摧毁了村子。"),
    ("He was punished by his father.", "父亲惩罚了他。"),
    ("The house was burned to the ground.", "大火烧毁了房子。"),
    ("The soldier was killed in the war.", "士兵在战争中死去。"),
]


def main():
    rows = []

    def add(src, tgt, intent):
        rows.append({"id": f"s{len(rows) + 1:03d}", "src": src, "tgt": tgt,
                     "src_lang": "en", "tgt_lang": "zh", "meta": {"intent": intent}})

    for i, (victim, victim_zh) in enumerate(VICTIMS):
        for j, (part, agent, verb_zh, agent_zh) in enumerate(ATTACKS):
            after, after_zh = AFTERMATH[(i + j) % len(AFTERMATH)]
            sep = "" if verb_zh.endswith("了钱包") or verb_zh.endswith("出去") else "了"
            add(f"{victim} was {part} by {agent} {after}.",
                f"{victim_zh}被{agent_zh}{verb_zh}{sep}，{after_zh}。", "pos")

    for thing in THINGS:
        s, sz, v, a, vz, az = thing
        for en, zh in NEUTRAL_FRAMES:
            add(en.format(S=s, V=v, A=a), zh.format(Sz=sz, Vz=vz, Az=az), "neg")

    for src, tgt in NO_BE:
        add(src, tgt, "no-be")
    for src, tgt in BEI_POSITIVE:
        add(src, tgt, "bei-positive")
    for src, tgt in BEI_NEUTRAL:
        add(src, tgt, "bei-neutral")
    for src, tgt in ACTIVE_NEG:
        add(src, tgt, "active-neg")

    assert len(rows) == 120, len(rows)
    out = pathlib.Path(__file__).with_name("pairs120.jsonl")
    with out.open("w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
